#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soam/geometry.hpp"
#include "soam/mesh.hpp"
#include "soam/sampling.hpp"
#include "soam/simplicial.hpp"

namespace soam {

struct SurfaceReport {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t faces = 0;
  long euler = 0;  // V - E + F
  bool manifold = true;  // no edge shared by three or more triangles
  bool orientable = false;
  std::size_t boundary_components = 0;
  std::size_t connected_components = 0;
  bool all_links_closed = false;
  std::optional<long> genus;  // closed, connected, orientable manifolds only

  bool closed() const { return manifold && boundary_components == 0 && all_links_closed; }
};

struct CurveReport {
  std::size_t cycles = 0;
  std::size_t open_paths = 0;
  std::size_t stray_components = 0;  // neither a simple cycle nor a simple path
  std::size_t max_degree = 0;
};

struct OrientationResult {
  bool manifold = true;
  bool orientable = false;
  std::size_t boundary_components = 0;
  std::vector<EdgeKey> nonmanifold_edges;
};

long euler_characteristic(const SimplicialComplex& c);
long euler_characteristic(const Mesh& m);

/// Orientation propagation across shared edges and boundary loop count.
/// With a non-manifold edge, `manifold` is false and `orientable` is meaningless.
OrientationResult orientability_and_boundary(const Mesh& m);
OrientationResult orientability_and_boundary(const SimplicialComplex& c);

SurfaceReport surface_report(const Mesh& m);
SurfaceReport surface_report(const SimplicialComplex& c);

/// Closed connected surfaces are homeomorphic iff orientability and Euler
/// characteristic agree. Throws UsageError unless both reports are closed and connected.
bool homeomorphic_closed_surfaces(const SurfaceReport& a, const SurfaceReport& b);

CurveReport curve_topology(const SimplicialComplex& c);

/// Key=value text block, one field per line.
std::string format_report(const SurfaceReport& r);
std::string format_report(const CurveReport& r);

struct DelaunayResult {
  std::vector<EdgeKey> edges;              // sorted
  std::vector<EdgeKey> degenerate_pairs;   // pairs whose empty-circle interval collapsed
  bool degenerate() const { return !degenerate_pairs.empty(); }
};

/// Exact Delaunay edge set of a planar point set by the empty-circle criterion:
/// (a, b) is an edge iff some circle through a and b has every other point
/// strictly outside. Circles through a and b have centres on the bisector; each
/// other point bounds the admissible centres on one side, so the test is an
/// interval intersection. Pairs whose interval shrinks below `tolerance`
/// (relative to the point-set extent) are co-circular: reported and excluded.
/// O(n^3). Ids are span positions. Throws UsageError for < 3 points, non-2D
/// points, or exact duplicates.
DelaunayResult brute_force_delaunay(std::span<const Point> points, double tolerance = 1e-9);

/// Competitive Hebbian graph: edge (a, b) for each witness whose two nearest
/// landmarks are a and b (ties to the smaller id). Values count witnesses.
struct WitnessGraph {
  std::map<EdgeKey, std::uint64_t> support;

  std::vector<EdgeKey> edges() const;
  std::uint64_t count(UnitId a, UnitId b) const;
};

WitnessGraph witness_graph(std::span<const Point> landmarks, std::span<const Point> witnesses);
void accumulate_witnesses(WitnessGraph& g, std::span<const Point> landmarks, std::span<const Point> witnesses);

/// Witness graph with `witness_count` witnesses drawn from `shape` through `transform`.
WitnessGraph restricted_witness_graph(std::span<const Point> landmarks, const ParametricShape& shape,
                                      const Similarity& transform, std::size_t witness_count, Rng& rng);

/// Witness graph with `witness_count` witnesses uniform in `box`.
WitnessGraph uniform_witness_graph(std::span<const Point> landmarks, const BoundingBox& box,
                                   std::size_t witness_count, Rng& rng);

/// One configuration of the rhombus a = (-1, 0), b = (1, 0), c = (0, h), d = (0, -h).
/// For h < 1 the short diagonal c-d is a Delaunay edge; at h = 1 the four points
/// are co-circular and no point of the plane has c and d as its two nearest.
struct CocircularStep {
  double h = 0.0;
  std::uint64_t middle_edge_witnesses = 0;  // witnesses of c-d
  bool middle_edge_delaunay = false;
  bool degenerate = false;
};

/// Moves h from h0 to 1 in `steps` equal increments (first h0, last exactly 1)
/// and counts witnesses of c-d among one fixed set of `witnesses` points
/// uniform in [-2, 2]^2.
std::vector<CocircularStep> cocircular_homotopy(std::size_t steps, std::size_t witnesses, std::uint64_t seed,
                                                double h0 = 0.5);

bool is_subset(std::span<const EdgeKey> sub, std::span<const EdgeKey> super);

}  // namespace soam
