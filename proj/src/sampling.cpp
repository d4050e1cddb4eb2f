#include "soam/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "soam/error.hpp"

namespace soam {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Torus signed distance around the z axis centred at (cx, 0, 0), plus gradient.
double torus_sdf(double x, double y, double z, double major, double minor, double g[3]) {
  const double rho = std::hypot(x, y);
  const double q = std::hypot(rho - major, z);
  if (g) {
    const double dr = q > 0.0 ? (rho - major) / q : 0.0;
    g[0] = rho > 0.0 ? dr * x / rho : 0.0;
    g[1] = rho > 0.0 ? dr * y / rho : 0.0;
    g[2] = q > 0.0 ? z / q : 0.0;
  }
  return q - minor;
}

constexpr double kDtMajor = 1.0, kDtMinor = 0.4, kDtOffset = 1.2, kDtBlend = 0.1;

// Polynomial smooth minimum; returns the blend weight of `a` in `h`.
double smooth_min(double a, double b, double k, double& h) {
  h = std::clamp(0.5 + 0.5 * (b - a) / k, 0.0, 1.0);
  return b + h * (a - b) - k * h * (1.0 - h);
}

}  // namespace

std::uint64_t Rng::index(std::uint64_t n) {
  if (n == 0) throw UsageError("Rng::index of an empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t v = engine_();
    if (v < limit) return v % n;
  }
}

Point add_noise(const Point& p, double delta, Rng& rng) {
  if (delta < 0.0) throw UsageError("noise radius must be >= 0");
  if (delta == 0.0) return p;
  Point off(p.dim());
  for (;;) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
      off[i] = rng.uniform(-1.0, 1.0);
      r2 += off[i] * off[i];
    }
    if (r2 <= 1.0) break;
  }
  return p + off * delta;
}

double DoubleTorus::value(const Point& p) const {
  const double x = p[0] / scale, y = p[1] / scale, z = p[2] / scale;
  double h;
  const double d = smooth_min(torus_sdf(x + kDtOffset, y, z, kDtMajor, kDtMinor, nullptr),
                              torus_sdf(x - kDtOffset, y, z, kDtMajor, kDtMinor, nullptr), kDtBlend, h);
  return d * scale;
}

Point DoubleTorus::gradient(const Point& p) const {
  const double x = p[0] / scale, y = p[1] / scale, z = p[2] / scale;
  double ga[3], gb[3], h;
  smooth_min(torus_sdf(x + kDtOffset, y, z, kDtMajor, kDtMinor, ga),
             torus_sdf(x - kDtOffset, y, z, kDtMajor, kDtMinor, gb), kDtBlend, h);
  return Point{h * ga[0] + (1 - h) * gb[0], h * ga[1] + (1 - h) * gb[1], h * ga[2] + (1 - h) * gb[2]};
}

std::optional<ParametricShape> shape_from_name(std::string_view name) {
  if (name == "circle") return Circle{};
  if (name == "torus") return Torus{};
  if (name == "helix") return HelixTorus{};
  if (name == "klein4") return KleinBottleR4{};
  if (name == "double-torus") return DoubleTorus{};
  return std::nullopt;
}

std::string shape_name(const ParametricShape& shape) {
  struct V {
    std::string operator()(const Circle&) const { return "circle"; }
    std::string operator()(const Torus&) const { return "torus"; }
    std::string operator()(const HelixTorus&) const { return "helix"; }
    std::string operator()(const KleinBottleR4&) const { return "klein4"; }
    std::string operator()(const DoubleTorus&) const { return "double-torus"; }
  };
  return std::visit(V{}, shape);
}

std::size_t ambient_dim(const ParametricShape& shape) {
  if (std::holds_alternative<Circle>(shape)) return 2;
  if (std::holds_alternative<KleinBottleR4>(shape)) return 4;
  return 3;
}

int manifold_dim(const ParametricShape& shape) {
  return std::holds_alternative<Circle>(shape) || std::holds_alternative<HelixTorus>(shape) ? 1 : 2;
}

BoundingBox shape_bounds(const ParametricShape& shape) {
  struct V {
    BoundingBox operator()(const Circle& c) const { return {{-c.radius, -c.radius}, {c.radius, c.radius}}; }
    BoundingBox operator()(const Torus& t) const {
      const double e = t.major + t.minor;
      return {{-e, -e, -t.minor}, {e, e, t.minor}};
    }
    BoundingBox operator()(const HelixTorus& t) const { return (*this)(Torus{t.major, t.minor}); }
    BoundingBox operator()(const KleinBottleR4& k) const {
      const double e = k.major + k.minor;
      return {{-e, -e, -k.minor, -k.minor}, {e, e, k.minor, k.minor}};
    }
    BoundingBox operator()(const DoubleTorus& d) const {
      const double ex = (kDtOffset + kDtMajor + kDtMinor) * d.scale;
      const double ey = (kDtMajor + kDtMinor) * d.scale;
      const double ez = kDtMinor * d.scale;
      return {{-ex, -ey, -ez}, {ex, ey, ez}};
    }
  };
  return std::visit(V{}, shape);
}

namespace {

Point torus_point(double major, double minor, double theta, double phi) {
  const double rho = major + minor * std::cos(phi);
  return Point{rho * std::cos(theta), rho * std::sin(theta), minor * std::sin(phi)};
}

Point project_double_torus(const DoubleTorus& dt, Rng& rng) {
  const BoundingBox box = shape_bounds(dt);
  for (;;) {
    Point p{rng.uniform(box.min[0], box.max[0]), rng.uniform(box.min[1], box.max[1]),
            rng.uniform(box.min[2], box.max[2])};
    for (int it = 0; it < 50; ++it) {
      const double v = dt.value(p);
      const Point g = dt.gradient(p);
      const double g2 = distance_squared(g, Point(3));
      if (g2 < 1e-12) break;
      p -= g * (v / g2);
      if (std::abs(dt.value(p)) < 1e-13 * dt.scale) return p;
    }
  }
}

}  // namespace

Point sample_shape(const ParametricShape& shape, Rng& rng) {
  struct V {
    Rng& rng;
    Point operator()(const Circle& c) const {
      const double t = kTwoPi * rng.uniform();
      return Point{c.radius * std::cos(t), c.radius * std::sin(t)};
    }
    Point operator()(const Torus& t) const {
      const double u = kTwoPi * rng.uniform();
      const double v = kTwoPi * rng.uniform();
      return torus_point(t.major, t.minor, u, v);
    }
    Point operator()(const HelixTorus& h) const {
      const double s = rng.uniform();
      return torus_point(h.major, h.minor, kTwoPi * h.p * s, kTwoPi * h.q * s);
    }
    Point operator()(const KleinBottleR4& k) const {
      const double u = kTwoPi * rng.uniform();
      const double v = kTwoPi * rng.uniform();
      const double rho = k.major + k.minor * std::cos(v);
      return Point{rho * std::cos(u), rho * std::sin(u), k.minor * std::sin(v) * std::cos(u / 2),
                   k.minor * std::sin(v) * std::sin(u / 2)};
    }
    Point operator()(const DoubleTorus& d) const { return project_double_torus(d, rng); }
  };
  return std::visit(V{rng}, shape);
}

double analytic_lfs(const ParametricShape& shape, const Point& p) {
  if (const auto* c = std::get_if<Circle>(&shape)) return c->radius;
  if (const auto* t = std::get_if<Torus>(&shape)) {
    // Medial axis: the core circle (at distance minor) and the symmetry axis.
    return std::min(t->minor, std::hypot(p[0], p[1]));
  }
  throw UnsupportedError("no closed-form medial axis for shape '" + shape_name(shape) + "'");
}

MeshVertexSource::MeshVertexSource(std::vector<Point> vertices, std::uint64_t seed, double noise)
    : vertices_(std::move(vertices)), rng_(seed), noise_(noise) {
  if (vertices_.empty()) throw UsageError("mesh source needs at least one vertex");
  if (noise < 0.0) throw UsageError("noise radius must be >= 0");
}

std::optional<Point> MeshVertexSource::next() {
  return add_noise(vertices_[rng_.index(vertices_.size())], noise_, rng_);
}

ParametricSource::ParametricSource(ParametricShape shape, Similarity transform, std::uint64_t seed, double noise)
    : shape_(shape), transform_(transform), rng_(seed), noise_(noise) {
  if (noise < 0.0) throw UsageError("noise radius must be >= 0");
}

std::optional<Point> ParametricSource::next() {
  ideal_ = transform_.apply(sample_shape(shape_, rng_));
  return add_noise(ideal_, noise_, rng_);
}

RecordedSource::RecordedSource(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw UsageError("recorded stream is empty");
}

std::optional<Point> RecordedSource::next() {
  if (pos_ == points_.size()) return std::nullopt;
  return points_[pos_++];
}

}  // namespace soam
