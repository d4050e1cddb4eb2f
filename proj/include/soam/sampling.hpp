#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "soam/geometry.hpp"
#include "soam/mesh.hpp"
#include "soam/soam.hpp"

namespace soam {

/// Deterministic random numbers. The engine is std::mt19937_64 and every draw is
/// mapped to doubles/indices by explicit arithmetic (no std:: distributions),
/// so a seed produces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform in [0, n), unbiased. n > 0.
  std::uint64_t index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// Uniform point in the closed ball of radius delta around p.
Point add_noise(const Point& p, double delta, Rng& rng);

struct Circle {
  double radius = 1.0;
};
struct Torus {
  double major = 3.0;
  double minor = 1.0;
};
/// Closed curve winding `p` times around the axis and `q` times around the tube.
struct HelixTorus {
  double major = 3.0;
  double minor = 1.0;
  int p = 1;
  int q = 176;
};
/// Klein bottle embedded in R^4 (a manifold there, unlike its immersion in R^3).
struct KleinBottleR4 {
  double major = 2.0;
  double minor = 1.0;
};
/// Genus-2 surface: smooth union of two tori (major 1, minor 0.4) whose centres
/// lie 2.4 apart on the x axis, all lengths multiplied by `scale`.
struct DoubleTorus {
  double scale = 1.0;

  double value(const Point& p) const;  // signed, negative inside
  Point gradient(const Point& p) const;
};

using ParametricShape = std::variant<Circle, Torus, HelixTorus, KleinBottleR4, DoubleTorus>;

/// Parses "circle", "torus", "helix", "klein4", "double-torus" (default parameters).
std::optional<ParametricShape> shape_from_name(std::string_view name);
std::string shape_name(const ParametricShape& shape);
std::size_t ambient_dim(const ParametricShape& shape);
int manifold_dim(const ParametricShape& shape);
BoundingBox shape_bounds(const ParametricShape& shape);

/// Ideal (noise-free) point for a uniform parameter draw. The double torus has no
/// global parameterization: a uniform point of its box is projected onto the surface.
Point sample_shape(const ParametricShape& shape, Rng& rng);

/// Distance from a surface point to the medial axis, where that axis is known in
/// closed form (circle, torus). Throws UnsupportedError otherwise.
double analytic_lfs(const ParametricShape& shape, const Point& p);

/// Uniformly chosen vertex of a (typically rescaled) vertex list, plus noise.
class MeshVertexSource : public SignalSource {
 public:
  MeshVertexSource(std::vector<Point> vertices, std::uint64_t seed, double noise = 0.0);
  std::optional<Point> next() override;
  std::size_t dim() const override { return vertices_.front().dim(); }

 private:
  std::vector<Point> vertices_;
  Rng rng_;
  double noise_;
};

/// Uniform parameter draws on a shape, mapped through `transform`, plus noise.
class ParametricSource : public SignalSource {
 public:
  ParametricSource(ParametricShape shape, Similarity transform, std::uint64_t seed, double noise = 0.0);
  std::optional<Point> next() override;
  std::size_t dim() const override { return ambient_dim(shape_); }

  /// The noise-free point behind the most recent sample.
  const Point& last_ideal() const { return ideal_; }

 private:
  ParametricShape shape_;
  Similarity transform_;
  Rng rng_;
  double noise_;
  Point ideal_;
};

/// Replays a fixed list of points, then reports end of stream.
class RecordedSource : public SignalSource {
 public:
  explicit RecordedSource(std::vector<Point> points);
  std::optional<Point> next() override;
  std::size_t dim() const override { return points_.front().dim(); }
  std::size_t remaining() const { return points_.size() - pos_; }

 private:
  std::vector<Point> points_;
  std::size_t pos_ = 0;
};

/// Icosahedron refined `subdivisions` times and projected on the unit sphere.
/// Level 4 gives 2562 vertices.
Mesh make_icosphere(int subdivisions);
/// Closed torus grid with `around` x `tube` vertices.
Mesh make_torus_mesh(double major, double minor, int around, int tube);
/// Marching-tetrahedra surface of `DoubleTorus{1}` on a `resolution`^3 grid.
Mesh make_double_torus_mesh(int resolution);

}  // namespace soam
