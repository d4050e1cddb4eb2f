#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "soam/spatial_index.hpp"

namespace soam {

/// Unordered pair of unit ids, stored with a < b.
struct EdgeKey {
  UnitId a, b;
  EdgeKey(UnitId x, UnitId y) : a(x < y ? x : y), b(x < y ? y : x) {}
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

/// Unordered triple of unit ids, stored sorted.
struct Triangle {
  std::array<UnitId, 3> v;
  Triangle(UnitId x, UnitId y, UnitId z);
  friend bool operator==(const Triangle&, const Triangle&) = default;
  friend auto operator<=>(const Triangle&, const Triangle&) = default;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& e) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t{e.a} << 32) | e.b);
  }
};
struct TriangleHash {
  std::size_t operator()(const Triangle& t) const noexcept;
};

/// Combinatorial link of a vertex: its neighbours and the arcs among them.
struct LinkGraph {
  std::vector<UnitId> vertices;  // sorted
  std::vector<EdgeKey> arcs;     // sorted
};

enum class LinkClass { Empty, Underconnected, Path, Cycle, Cycle3, Overconnected };

std::string_view to_string(LinkClass c);

/// A simplex of dimension <= 2 as a sorted vertex list of length 1..3.
struct Simplex {
  std::vector<UnitId> v;
  friend bool operator==(const Simplex&, const Simplex&) = default;
  friend auto operator<=>(const Simplex&, const Simplex&) = default;
};

/// The growing network: vertices, aged edges, and triangles that are exactly
/// the 3-cliques of the edge graph (flag complex).
///
/// Vertex ids are chosen by the caller and never reused by this class.
/// Every mutation keeps the triangle set equal to the clique set.
class SimplicialComplex {
 public:
  explicit SimplicialComplex(int manifold_dim = 2);

  int manifold_dim() const { return manifold_dim_; }

  void add_vertex(UnitId id);
  /// Removes the vertex and every simplex containing it.
  void remove_vertex(UnitId id);
  bool has_vertex(UnitId id) const { return id < adj_.size() && alive_[id]; }

  /// Returns true if the edge was created, false if it existed (its age is then reset to 0).
  bool add_edge(UnitId a, UnitId b);
  /// Inserts an edge with a given age, or raises the age of an existing one to `age`
  /// if larger. Returns true if created.
  bool add_edge_with_age(UnitId a, UnitId b, int age);
  bool remove_edge(UnitId a, UnitId b);
  bool has_edge(UnitId a, UnitId b) const;

  int age(UnitId a, UnitId b) const;
  void set_age(UnitId a, UnitId b, int age);

  /// Sorted neighbour ids.
  const std::vector<UnitId>& neighbors(UnitId id) const;
  std::size_t degree(UnitId id) const { return neighbors(id).size(); }
  std::vector<UnitId> common_neighbors(UnitId a, UnitId b) const;

  bool has_triangle(UnitId a, UnitId b, UnitId c) const;

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return ages_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }

  /// Sorted snapshots, for output and tests.
  std::vector<UnitId> vertices() const;
  std::vector<std::pair<EdgeKey, int>> edges() const;
  std::vector<Triangle> triangles() const;

  LinkGraph link_of(UnitId u) const;
  std::vector<Simplex> star_of(UnitId u) const;

 private:
  void require_vertex(UnitId id, const char* op) const;
  void link_triangles(UnitId a, UnitId b);

  int manifold_dim_;
  std::size_t vertex_count_ = 0;
  std::vector<std::vector<UnitId>> adj_;
  std::vector<char> alive_;
  std::unordered_map<EdgeKey, int, EdgeKeyHash> ages_;
  std::unordered_set<Triangle, TriangleHash> triangles_;
};

/// All faces of the given simplices, the simplices included. Sorted, unique.
std::vector<Simplex> closure_of(std::span<const Simplex> simplices);

/// Combinatorial type of a link for a manifold of dimension 1 or 2.
LinkClass classify_link(const LinkGraph& link, int manifold_dim);

}  // namespace soam
