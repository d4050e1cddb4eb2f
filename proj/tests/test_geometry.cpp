#include <doctest.h>

#include <cmath>
#include <vector>

#include "soam/error.hpp"
#include "soam/geometry.hpp"
#include "soam/sampling.hpp"
#include "soam/spatial_index.hpp"

using namespace soam;

namespace {

Point random_point(Rng& rng, std::size_t d, double lo = -1.0, double hi = 1.0) {
  Point p(d);
  for (std::size_t k = 0; k < d; ++k) p[k] = rng.uniform(lo, hi);
  return p;
}

// Independent scalar recomputation.
double scalar_distance(const Point& a, const Point& b) {
  long double s = 0;
  for (std::size_t k = 0; k < a.dim(); ++k) s += (long double)(a[k] - b[k]) * (a[k] - b[k]);
  return static_cast<double>(std::sqrt(s));
}

}  // namespace

TEST_CASE("distance basics") {
  CHECK(distance(Point{0, 0}, Point{3, 4}) == 5.0);
  CHECK(distance(Point{1, 2, 3}, Point{1, 2, 3}) == 0.0);
  CHECK_THROWS_AS(distance(Point{0, 0}, Point{0, 0, 0}), UsageError);
}

TEST_CASE("distance agrees with a scalar recomputation") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = 2 + rng.index(3);
    const Point a = random_point(rng, d, -300, 300), b = random_point(rng, d, -300, 300), c = random_point(rng, d, -300, 300);
    CHECK(std::abs(distance(a, b) - scalar_distance(a, b)) <= 1e-12 * std::max(1.0, scalar_distance(a, b)));
    CHECK(distance(a, b) == distance(b, a));
    CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
  }
}

TEST_CASE("points reject non-finite coordinates") {
  Point p{0.0, NAN};
  CHECK_FALSE(p.finite());
  CHECK(Point{1.0, 2.0}.finite());
}

TEST_CASE("rescale to major size") {
  std::vector<Point> cube;
  for (int i = 0; i < 8; ++i) cube.push_back(Point{double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  RescaleResult r = rescale_to_major(cube, 256);
  CHECK_FALSE(r.degenerate);
  const BoundingBox box = bounding_box(r.points);
  for (std::size_t k = 0; k < 3; ++k) CHECK(box.max[k] - box.min[k] == doctest::Approx(256));
  CHECK(box.center()[0] == doctest::Approx(0.5));

  std::vector<Point> rect = {Point{0, 0}, Point{2, 0}, Point{2, 1}, Point{0, 1}};
  const BoundingBox rb = bounding_box(rescale_to_major(rect, 256).points);
  CHECK(rb.max[0] - rb.min[0] == doctest::Approx(256));
  CHECK(rb.max[1] - rb.min[1] == doctest::Approx(128));

  std::vector<Point> same = {Point{1, 1}, Point{1, 1}};
  RescaleResult d = rescale_to_major(same, 256);
  CHECK(d.degenerate);
  CHECK(d.points == same);
}

TEST_CASE("rescale is idempotent") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    std::vector<Point> pts;
    for (int k = 0; k < 20; ++k) pts.push_back(random_point(rng, 3, -7, 3));
    const auto once = rescale_to_major(pts, 256).points;
    const auto twice = rescale_to_major(once, 256).points;
    for (std::size_t k = 0; k < once.size(); ++k) CHECK(distance(once[k], twice[k]) <= 1e-9);
  }
}

TEST_CASE("nearest two: examples") {
  std::vector<Point> l = {Point{0, 0}, Point{1, 0}, Point{3, 0}};
  CHECK(nearest_two(l, Point{0.4, 0}) == NearestTwo{0, 1});
  std::vector<Point> tie = {Point{0, 0}, Point{1, 0}};
  CHECK(nearest_two(tie, Point{0.5, 0}) == NearestTwo{0, 1});
  std::vector<Point> one = {Point{0, 0}};
  CHECK_THROWS_AS(nearest_two(one, Point{0, 0}), UsageError);
}

TEST_CASE("nearest two: the tie-break prefers smaller ids for best and second") {
  // Four points equidistant from the query, inserted in scrambled id order.
  SpatialIndex index(2, 1.0);
  index.insert(7, Point{1, 0});
  index.insert(3, Point{0, 1});
  index.insert(9, Point{-1, 0});
  index.insert(5, Point{0, -1});
  CHECK(index.nearest_two(Point{0, 0}) == NearestTwo{3, 5});
  CHECK(index.nearest_two_scan(Point{0, 0}) == NearestTwo{3, 5});
}

TEST_CASE("spatial index equals the linear scan under mutation") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + rng.index(3);
    const double cell = rng.uniform(0.05, 3.0);
    SpatialIndex index(d, cell);
    std::vector<Point> pos;
    std::vector<bool> alive;
    const int n = 2 + static_cast<int>(rng.index(60));
    for (int i = 0; i < n; ++i) {
      // Coarse lattice coordinates make exact distance ties common.
      Point p = random_point(rng, d, -4, 4);
      if (rng.uniform() < 0.5)
        for (std::size_t k = 0; k < d; ++k) p[k] = std::round(p[k] * 2) / 2;
      index.insert(static_cast<UnitId>(i), p);
      pos.push_back(p);
      alive.push_back(true);
    }
    for (int op = 0; op < 20; ++op) {
      const auto id = static_cast<UnitId>(rng.index(pos.size()));
      const double u = rng.uniform();
      if (u < 0.3 && alive[id] && index.size() > 2) {
        index.remove(id);
        alive[id] = false;
      } else if (u < 0.8 && alive[id]) {
        pos[id] = random_point(rng, d, -40, 40);
        index.move(id, pos[id]);
      }
      std::vector<Point> live;
      std::vector<UnitId> ids;
      for (std::size_t i = 0; i < pos.size(); ++i)
        if (alive[i]) {
          live.push_back(pos[i]);
          ids.push_back(static_cast<UnitId>(i));
        }
      Point q = random_point(rng, d, -10, 10);
      if (rng.uniform() < 0.3) q = pos[ids[rng.index(ids.size())]];
      const NearestTwo got = index.nearest_two(q);
      const NearestTwo want = nearest_two(live, q);
      REQUIRE(got.best == ids[want.best]);
      REQUIRE(got.second == ids[want.second]);
    }
  }
}

TEST_CASE("nearest two on 100 points and 1000 queries") {
  Rng rng(77);
  std::vector<Point> pts;
  SpatialIndex index(2, 0.1);
  for (int i = 0; i < 100; ++i) {
    pts.push_back(random_point(rng, 2));
    index.insert(static_cast<UnitId>(i), pts.back());
  }
  for (int i = 0; i < 1000; ++i) {
    const Point q = random_point(rng, 2, -1.5, 1.5);
    CHECK(index.nearest_two(q) == nearest_two(pts, q));
  }
}
