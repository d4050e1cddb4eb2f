#include "soam/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "soam/error.hpp"

namespace soam {

Point::Point(std::size_t dim) : dim_(static_cast<std::uint8_t>(dim)) {
  if (dim == 0 || dim > kMaxDim) throw UsageError("point dimension must be in 1..4, got " + std::to_string(dim));
}

Point::Point(std::initializer_list<double> coords) : Point(coords.size()) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

bool Point::finite() const {
  return std::all_of(c_.begin(), c_.begin() + dim_, [](double v) { return std::isfinite(v); });
}

static void require_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim())
    throw UsageError("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

Point& Point::operator+=(const Point& o) {
  require_same_dim(*this, o);
  for (std::size_t i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  require_same_dim(*this, o);
  for (std::size_t i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Point& Point::operator*=(double s) {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] *= s;
  return *this;
}

bool operator==(const Point& a, const Point& b) {
  return a.dim_ == b.dim_ && std::equal(a.c_.begin(), a.c_.begin() + a.dim_, b.c_.begin());
}

Point midpoint(const Point& a, const Point& b) { return (a + b) * 0.5; }

double norm(const Point& p) {
  double s = 0.0;
  for (double v : p.coords()) s += v * v;
  return std::sqrt(s);
}

double distance_squared(const Point& a, const Point& b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(const Point& a, const Point& b) { return std::sqrt(distance_squared(a, b)); }

double BoundingBox::major_extent() const {
  double m = 0.0;
  for (std::size_t i = 0; i < min.dim(); ++i) m = std::max(m, max[i] - min[i]);
  return m;
}

Point BoundingBox::center() const { return midpoint(min, max); }

BoundingBox bounding_box(std::span<const Point> points) {
  if (points.empty()) throw UsageError("bounding box of an empty point list");
  BoundingBox box{points.front(), points.front()};
  for (const Point& p : points) {
    require_same_dim(p, box.min);
    for (std::size_t i = 0; i < p.dim(); ++i) {
      box.min[i] = std::min(box.min[i], p[i]);
      box.max[i] = std::max(box.max[i], p[i]);
    }
  }
  return box;
}

Similarity rescale_transform(const BoundingBox& box, double major) {
  if (!(major > 0.0)) throw UsageError("rescale target must be positive");
  const double extent = box.major_extent();
  return Similarity{extent > 0.0 ? major / extent : 1.0, box.center()};
}

RescaleResult rescale_to_major(std::span<const Point> points, double major) {
  const BoundingBox box = bounding_box(points);
  RescaleResult out;
  out.transform = rescale_transform(box, major);
  out.degenerate = box.major_extent() == 0.0;
  out.points.reserve(points.size());
  for (const Point& p : points) out.points.push_back(out.degenerate ? p : out.transform.apply(p));
  return out;
}

}  // namespace soam
