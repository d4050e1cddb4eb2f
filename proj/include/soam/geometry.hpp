#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace soam {

inline constexpr std::size_t kMaxDim = 4;

/// A position in R^d, d in {1..4}. Fixed capacity so points stay trivially copyable.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim);
  Point(std::initializer_list<double> coords);

  std::size_t dim() const { return dim_; }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  std::span<const double> coords() const { return {c_.data(), dim_}; }

  bool finite() const;

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(double s);

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend bool operator==(const Point& a, const Point& b);

 private:
  std::array<double, kMaxDim> c_{};
  std::uint8_t dim_ = 0;
};

Point midpoint(const Point& a, const Point& b);
double norm(const Point& p);

/// Squared Euclidean distance. Throws UsageError on dimension mismatch.
double distance_squared(const Point& a, const Point& b);
double distance(const Point& a, const Point& b);

struct BoundingBox {
  Point min;
  Point max;

  double major_extent() const;
  Point center() const;
};

/// Throws UsageError on an empty list or mixed dimensions.
BoundingBox bounding_box(std::span<const Point> points);

/// Uniform scale + translation mapping a box onto one whose longest edge is `major`, same center.
struct Similarity {
  double scale = 1.0;
  Point center;  // fixed point of the map

  Point apply(const Point& p) const { return center + (p - center) * scale; }
};

struct RescaleResult {
  std::vector<Point> points;
  Similarity transform;
  bool degenerate = false;  // all input points identical; points returned unchanged
};

Similarity rescale_transform(const BoundingBox& box, double major);
RescaleResult rescale_to_major(std::span<const Point> points, double major);

}  // namespace soam
