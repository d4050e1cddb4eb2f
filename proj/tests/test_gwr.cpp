#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "soam/error.hpp"
#include "soam/gwr.hpp"
#include "soam/sampling.hpp"

using namespace soam;

namespace {

double brute_gap(const std::vector<Point>& units, const std::vector<Point>& samples) {
  double worst = 0.0;
  for (const Point& s : samples) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& u : units) best = std::min(best, distance(s, u));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("gwr params") {
  SoamParams sp;
  sp.r_max = 12;
  sp.stability_window = 5000;
  const GwrParams g = GwrParams::from(sp);
  CHECK(g.insertion_radius == 12);
  CHECK(g.max_age == sp.max_age);
  CHECK_NOTHROW(g.validate());
  GwrParams bad;
  bad.insertion_radius = -1;
  CHECK_THROWS_AS(bad.validate(), UsageError);
}

TEST_CASE("gwr inserts only once the winner has habituated") {
  GwrParams p;
  Gwr g(p, Point{0, 0}, Point{1, 0});
  const Point far{100, 0};
  int wins = 0;
  while (g.firing(1) > p.firing_threshold) {
    const StepEvents ev = g.process_signal(far);
    CHECK(ev.winner == 1);
    CHECK_FALSE(ev.unit_inserted);
    REQUIRE(++wins < 100);
  }
  CHECK(wins > 1);
  const Point before = g.position(1);
  const StepEvents ev = g.process_signal(far);
  REQUIRE(ev.unit_inserted);
  const UnitId n = *ev.unit_inserted;
  CHECK(distance(g.position(n), midpoint(before, far)) < 1e-12);
  CHECK(g.complex().has_edge(1, n));
  CHECK(g.complex().has_edge(n, 0));
  CHECK_FALSE(g.complex().has_edge(0, 1));
  CHECK(g.insertions() == 1);
  CHECK(g.last_insertion() == g.signals_processed());
}

TEST_CASE("gwr adapts a habituated winner when the signal is close") {
  GwrParams p;
  Gwr g(p, Point{0, 0}, Point{1, 0});
  for (int i = 0; i < 50; ++i) CHECK_FALSE(g.process_signal(Point{1.5, 0}).unit_inserted);
  CHECK(g.firing(1) <= p.firing_threshold);
  CHECK(g.unit_count() == 2);
}

TEST_CASE("gwr prunes stale edges") {
  GwrParams p;
  p.max_age = 3;
  Gwr g(p, Point{0, 0}, Point{10, 0});
  // Build a third unit by insertion, then keep the signals at the far end.
  Rng rng(2);
  for (int i = 0; i < 2000; ++i) g.process_signal(Point{rng.uniform(-100, 100), rng.uniform(-100, 100)});
  for (const auto& [e, age] : g.complex().edges()) CHECK(age <= p.max_age);
  for (UnitId u : g.unit_ids()) CHECK(g.complex().degree(u) > 0);
}

TEST_CASE("coverage gap matches brute force") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point> units, samples;
    const int dim = 2 + static_cast<int>(rng.index(2));
    auto draw = [&] {
      Point p = dim == 2 ? Point{0, 0} : Point{0, 0, 0};
      for (int k = 0; k < dim; ++k) p[k] = rng.uniform(-50, 50);
      return p;
    };
    for (int i = 0, n = 1 + static_cast<int>(rng.index(40)); i < n; ++i) units.push_back(draw());
    for (int i = 0; i < 300; ++i) samples.push_back(draw());
    REQUIRE(coverage_gap(units, samples) == doctest::Approx(brute_gap(units, samples)).epsilon(1e-12));
  }
}

TEST_CASE("gwr covers the circle and stops on quiescence") {
  const Similarity tr = rescale_transform(shape_bounds(Circle{}), 256);
  auto train = [&] {
    GwrParams p;
    p.quiescence_window = 20'000;
    ParametricSource src(Circle{}, tr, 9);
    const Point a = *src.next(), b = *src.next();
    Gwr g(p, a, b);
    const RunReport r = run(g, src, 1000);
    return std::pair{std::move(g), r};
  };
  auto [g, report] = train();
  CHECK(report.reason == StopReason::Quiescent);
  CHECK(g.signals_processed() - g.last_insertion() >= 20'000);
  Rng rng(10);
  std::vector<Point> samples;
  for (int i = 0; i < 10'000; ++i) samples.push_back(tr.apply(sample_shape(Circle{}, rng)));
  CHECK(coverage_gap(g.positions(), samples) <= g.params().insertion_radius);

  auto [g2, report2] = train();
  CHECK(report2.telemetry == report.telemetry);
  CHECK(g2.positions() == g.positions());
}
