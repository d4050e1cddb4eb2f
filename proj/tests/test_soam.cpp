#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "soam/error.hpp"
#include "soam/habituation.hpp"
#include "soam/io.hpp"
#include "soam/sampling.hpp"
#include "soam/soam.hpp"

using namespace soam;

namespace {

struct UnitSpec {
  Point position;
  double firing;
  UnitState state;
  double threshold = 25.0;
};

SoamSnapshot make_snapshot(const SoamParams& p, const std::vector<UnitSpec>& units,
                           const std::vector<std::pair<UnitId, UnitId>>& edges) {
  SoamSnapshot s;
  s.params = p;
  s.dim = units.front().position.dim();
  s.next_id = static_cast<UnitId>(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    Unit u;
    u.position = units[i].position;
    u.firing = units[i].firing;
    u.threshold = units[i].threshold;
    u.state = units[i].state;
    s.units.emplace_back(static_cast<UnitId>(i), u);
  }
  for (auto [a, b] : edges) s.edges.emplace_back(EdgeKey(a, b), 0);
  std::sort(s.edges.begin(), s.edges.end());
  return s;
}

// Centre 0 with a closed ring 1..6 in the plane z = 0.
std::vector<std::pair<UnitId, UnitId>> hex_fan_edges() {
  std::vector<std::pair<UnitId, UnitId>> e;
  for (UnitId i = 1; i <= 6; ++i) {
    e.push_back({0, i});
    e.push_back({i, i % 6 + 1});
  }
  return e;
}

Point ring_point(int i, double radius) {
  const double a = 2.0 * M_PI * i / 6.0;
  return Point{radius * std::cos(a), radius * std::sin(a), 0.0};
}

// Ring of n units in dimension 1, all habituated and stable.
SoamSnapshot stable_ring(int n, double radius) {
  SoamParams p;
  p.manifold_dim = 1;
  std::vector<UnitSpec> units;
  std::vector<std::pair<UnitId, UnitId>> edges;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    units.push_back({Point{radius * std::cos(a), radius * std::sin(a)}, 0.1, UnitState::Patch});
    edges.push_back({static_cast<UnitId>(i), static_cast<UnitId>((i + 1) % n)});
  }
  return make_snapshot(p, units, edges);
}

std::vector<Point> positions(const Soam& s, std::vector<UnitId>* ids = nullptr) {
  std::vector<Point> out;
  for (UnitId id : s.unit_ids()) {
    out.push_back(s.unit(id).position);
    if (ids) ids->push_back(id);
  }
  return out;
}

}  // namespace

TEST_CASE("parameter validation") {
  SoamParams p;
  CHECK_NOTHROW(p.validate());
  SoamParams bad = p;
  bad.r_min = 30;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = p;
  bad.manifold_dim = 3;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = p;
  bad.max_age = 0;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = p;
  bad.firing_threshold = 1.5;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  CHECK(p.effective_alpha_r() == doctest::Approx(1.0 / 24.5));
}

TEST_CASE("init gives two fresh active units") {
  SoamParams p;
  Soam s(p, Point{0, 0}, Point{1, 1});
  CHECK(s.unit_count() == 2);
  CHECK(s.complex().edge_count() == 0);
  for (UnitId id : s.unit_ids()) {
    CHECK(s.unit(id).state == UnitState::Active);
    CHECK(s.unit(id).firing == p.firing_max);
    CHECK(s.unit(id).threshold == p.r_max);
  }
  CHECK_THROWS_AS(Soam(p, Point{0, 0}, Point{1, 1, 1}), UsageError);
  CHECK_THROWS_AS(s.process_signal(Point{0, 0, 0}), UsageError);
  CHECK_THROWS_AS(s.unit(99), UsageError);
}

TEST_CASE("firing adaptation") {
  SoamParams p;
  CHECK(adapt_firing(1.0, Role::Winner, p) - 1.0 == doctest::Approx(-1.0 / p.tau_f));
  CHECK(adapt_firing(1.0, Role::Neighbor, p) - 1.0 == doctest::Approx(-1.0 / p.tau_f_n));
  const double fixed = p.firing_max - 1.0 / p.alpha_h;
  CHECK(adapt_firing(fixed, Role::Winner, p) == doctest::Approx(fixed).epsilon(1e-15));
}

TEST_CASE("threshold adaptation") {
  SoamParams p;
  CHECK(adapt_threshold(p.r_max, UnitState::Patch, p) == p.r_max);
  CHECK(adapt_threshold(p.r_max, UnitState::Singular, p) - p.r_max == doctest::Approx(-1.0 / p.tau_r_hab));
  CHECK(adapt_threshold(10.0, UnitState::Connected, p) == 10.0);
  CHECK(adapt_threshold(10.0, UnitState::Active, p) == 10.0);
  double r = p.r_max;
  for (int i = 0; i < 20000; ++i) r = adapt_threshold(r, UnitState::Singular, p);
  CHECK(std::abs(r - p.r_min) < 1e-6);
  for (int i = 0; i < 20000; ++i) r = adapt_threshold(r, UnitState::HalfDisk, p);
  CHECK(std::abs(r - p.r_max) < 1e-6);
}

TEST_CASE("habituation closed forms") {
  // h(t) = H - (1 - exp(-a t / tau)) / a and its dishabituating counterpart.
  const double H = 1.0, a = 1.05, dt = 0.01;
  for (double tau : {3.0, 3.33, 9.0, 14.33}) {
    double hab = H, dis = H - 1.0 / a, worst = 0.0;
    const int steps = static_cast<int>(std::lround(10.0 * tau / dt));
    for (int k = 1; k <= steps; ++k) {
      hab = habituate(hab, H, a, tau, dt);
      dis = dishabituate(dis, H, a, tau, dt);
      const double t = k * dt;
      worst = std::max(worst, std::abs(hab - (H - (1.0 - std::exp(-a * t / tau)) / a)));
      worst = std::max(worst, std::abs(dis - (H - std::exp(-a * t / tau) / a)));
    }
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("state classification of a hexagonal fan") {
  SoamParams p;
  std::vector<UnitSpec> units = {{Point{0, 0, 0}, 0.1, UnitState::Patch}};
  for (int i = 0; i < 6; ++i) units.push_back({ring_point(i, 10), 0.1, UnitState::Boundary});
  Soam s = Soam::from_snapshot(make_snapshot(p, units, hex_fan_edges()));
  CHECK(s.unit(0).state == UnitState::Patch);
  CHECK(s.compute_state(3) == UnitState::Boundary);
  CHECK(s.states_consistent());

  // A pendant vertex on the centre makes its link exceed a circle.
  units.push_back({Point{0, 0, 10}, 0.1, UnitState::Connected});
  units[0].state = UnitState::Singular;
  auto edges = hex_fan_edges();
  edges.push_back({0, 7});
  // Ring units now have a singular neighbour, so they stay half-disks.
  for (int i = 1; i <= 6; ++i) units[i].state = UnitState::HalfDisk;
  Soam t = Soam::from_snapshot(make_snapshot(p, units, edges));
  CHECK(t.unit(0).state == UnitState::Singular);
  CHECK(t.unit(7).state == UnitState::Connected);

  // A non-habituated neighbour demotes the centre to Habituated.
  units.pop_back();
  units[0].state = UnitState::Habituated;
  units[2].firing = 0.9;
  units[2].state = UnitState::Active;
  for (int i : {1, 3, 4, 5, 6}) units[i].state = UnitState::Habituated;
  // Units 1 and 3 neighbour the active unit 2; 4, 5 and 6 neighbour the
  // centre, which is no longer regular, and keep their half-disk link.
  for (int i : {4, 5, 6}) units[i].state = UnitState::HalfDisk;
  Soam h = Soam::from_snapshot(make_snapshot(p, units, hex_fan_edges()));
  CHECK(h.unit(0).state == UnitState::Habituated);
  CHECK(h.states_consistent());
}

TEST_CASE("snapshots with inconsistent states are rejected") {
  SoamParams p;
  std::vector<UnitSpec> units = {{Point{0, 0, 0}, 0.1, UnitState::Disk}};
  for (int i = 0; i < 6; ++i) units.push_back({ring_point(i, 10), 0.1, UnitState::Boundary});
  CHECK_THROWS_AS(Soam::from_snapshot(make_snapshot(p, units, hex_fan_edges())), UsageError);
}

TEST_CASE("non-habituated winner never inserts") {
  SoamParams p;
  Soam s(p, Point{0, 0}, Point{10, 0});
  const StepEvents ev = s.process_signal(Point{-1000, 0});
  CHECK(ev.winner == 0);
  CHECK_FALSE(ev.unit_inserted);
  CHECK(s.unit_count() == 2);
}

TEST_CASE("habituated winner inserts at the midpoint") {
  SoamParams p;
  Soam s(p, Point{0, 0}, Point{10, 0});
  while (s.unit(0).firing > p.firing_threshold) s.process_signal(s.unit(0).position);
  const Point pb = s.unit(0).position;
  const Point xi{-100, 0};
  const StepEvents ev = s.process_signal(xi);
  REQUIRE(ev.unit_inserted);
  const UnitId n = *ev.unit_inserted;
  CHECK(s.complex().has_edge(0, n));
  CHECK(s.complex().has_edge(n, 1));
  CHECK_FALSE(s.complex().has_edge(0, 1));
  // The new unit then moved as a neighbour of the winner.
  const Point m = midpoint(pb, xi);
  const double fn = adapt_firing(p.firing_max, Role::Neighbor, p);
  const Point expect = m + (xi - m) * (p.eta_nb * fn);
  CHECK(s.unit(n).position == expect);
  CHECK(s.unit(n).firing == fn);
  CHECK(s.insertions() == 1);
}

TEST_CASE("habituated winner merges a close runner-up") {
  SoamParams p;
  Soam s(p, Point{0, 0}, Point{0.3, 0});
  while (s.unit(0).firing > p.firing_threshold) s.process_signal(Point{0, 0});
  CHECK(s.merges() == 0);
  // Habituation is checked before the firing update, so the merge comes one signal later.
  const StepEvents ev = s.process_signal(Point{0, 0});
  CHECK(s.merges() == 1);
  CHECK(ev.units_merged);
  CHECK(ev.reseeded);
  CHECK(s.unit_count() == 2);
}

TEST_CASE("merge keeps the winner, inherits edges, removes the runner-up") {
  SoamParams p;
  p.manifold_dim = 1;
  // Path 2 - 0 - 1 - 3 with 0 and 1 closer than r_min.
  std::vector<UnitSpec> units = {{Point{0, 0}, 0.1, UnitState::Patch},
                                 {Point{0.2, 0}, 0.1, UnitState::Patch},
                                 {Point{-20, 0}, 0.1, UnitState::Boundary},
                                 {Point{20, 0}, 0.1, UnitState::Boundary}};
  Soam s = Soam::from_snapshot(make_snapshot(p, units, {{0, 1}, {0, 2}, {1, 3}}));
  const StepEvents ev = s.process_signal(Point{-0.01, 0});
  REQUIRE(ev.units_merged);
  CHECK(ev.units_merged->first == 0);
  CHECK(ev.units_merged->second == 1);
  CHECK_FALSE(s.complex().has_vertex(1));
  CHECK(s.complex().has_edge(0, 3));
  CHECK(s.complex().has_edge(0, 2));
  CHECK(s.states_consistent());
}

TEST_CASE("merge in a two-unit network re-seeds two units") {
  SoamParams p;
  p.manifold_dim = 1;
  std::vector<UnitSpec> units = {{Point{0, 0}, 0.1, UnitState::Connected}, {Point{0.2, 0}, 0.9, UnitState::Active}};
  Soam s = Soam::from_snapshot(make_snapshot(p, units, {}));
  const StepEvents ev = s.process_signal(Point{0, 0});
  CHECK(ev.units_merged);
  CHECK(ev.reseeded);
  CHECK(s.unit_count() == 2);
  for (int i = 0; i < 100; ++i) s.process_signal(Point{double(i % 7), 1.0});
  CHECK(s.states_consistent());
}

TEST_CASE("stable winner freezes ages and moves alone") {
  Soam s = Soam::from_snapshot(stable_ring(8, 10));
  // Age the ring's edges so a change would be visible.
  SoamSnapshot snap = s.snapshot();
  for (auto& [e, age] : snap.edges) age = 5;
  s = Soam::from_snapshot(snap);
  REQUIRE(s.unit(0).state == UnitState::Patch);
  const Point xi{10.5, 0.5};
  const Point p0 = s.unit(0).position;
  const std::vector<Point> before = positions(s);
  const StepEvents ev = s.process_signal(xi);
  REQUIRE(ev.winner == 0);
  CHECK(ev.second == 1);
  CHECK(s.complex().age(0, 1) == 0);
  CHECK(s.complex().age(0, 7) == 5);
  const double f = adapt_firing(0.1, Role::Winner, s.params());
  CHECK(s.unit(0).position == p0 + (xi - p0) * (s.params().eta_stable * f));
  const std::vector<Point> after = positions(s);
  for (std::size_t i = 1; i < after.size(); ++i) CHECK(after[i] == before[i]);
}

TEST_CASE("run honours max_signals and telemetry cadence") {
  SoamParams p;
  p.manifold_dim = 1;
  p.max_signals = 0;
  ParametricSource src(Circle{}, rescale_transform(shape_bounds(Circle{}), 256), 1);
  Soam s(p, *src.next(), *src.next());
  RunReport r = run(s, src, RunOptions::from(p, 7));
  CHECK(r.reason == StopReason::MaxSignals);
  CHECK(r.signals == 0);
  CHECK(s.unit_count() == 2);
  for (std::uint64_t n : {1ull, 6ull, 7ull, 8ull, 100ull, 1001ull}) {
    p.max_signals = n;
    Soam t(p, Point{0, 128}, Point{0, -128});
    RunReport rr = run(t, src, RunOptions{n, 1'000'000, 7});
    CHECK(rr.telemetry.size() == (n + 6) / 7);
    for (const TelemetryFrame& f : rr.telemetry) {
      std::size_t sum = 0;
      for (std::size_t c : f.state_counts) sum += c;
      CHECK(sum == f.units);
    }
  }
}

TEST_CASE("recorded source exhaustion stops the run") {
  SoamParams p;
  std::vector<Point> pts = {Point{0, 0}, Point{1, 0}, Point{2, 0}};
  RecordedSource src(pts);
  Soam s(p, *src.next(), *src.next());
  RunReport r = run(s, src, RunOptions::from(p));
  CHECK(r.reason == StopReason::SourceExhausted);
  CHECK(r.signals == 1);
}

TEST_CASE("network invariants hold after every signal") {
  // Small random streams with small R keep the networks busy: insertions,
  // merges, pruning and idle removal all occur.
  Rng meta(4242);
  std::size_t inserted = 0, merged = 0, pruned = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    SoamParams p;
    p.manifold_dim = 1 + static_cast<int>(meta.index(2));
    p.r_max = meta.uniform(3.0, 12.0);
    p.r_min = meta.uniform(0.5, 2.5);
    p.max_age = 5 + static_cast<int>(meta.index(30));
    p.idle_factor = meta.uniform(2.0, 100.0);
    const ParametricShape shape = p.manifold_dim == 1 ? ParametricShape{Circle{}} : ParametricShape{Torus{}};
    ParametricSource src(shape, rescale_transform(shape_bounds(shape), 40.0), 1000 + trial, meta.uniform(0.0, 2.0));
    Soam s(p, *src.next(), *src.next());
    const int signals = 150 + static_cast<int>(meta.index(250));
    for (int k = 0; k < signals; ++k) {
      const Point xi = *src.next();
      std::vector<UnitId> ids;
      const std::vector<Point> pos = positions(s, &ids);
      const NearestTwo want = nearest_two(pos, xi);
      const StepEvents ev = s.process_signal(xi);
      REQUIRE(ev.winner == ids[want.best]);
      REQUIRE(ev.second == ids[want.second]);
      if (ev.unit_inserted) {
        ++inserted;
        REQUIRE(distance(xi, midpoint(pos[want.best], xi)) < distance(xi, pos[want.best]));
      }
      if (ev.units_merged) ++merged;
      pruned += ev.edges_pruned;
      REQUIRE(s.unit_count() >= 2);
      REQUIRE(s.states_consistent());
      const double fmin = p.firing_max - 1.0 / p.alpha_h - 1e-9;
      for (UnitId id : s.unit_ids()) {
        const Unit& u = s.unit(id);
        REQUIRE(u.firing <= p.firing_max);
        REQUIRE(u.firing >= fmin);
        REQUIRE(u.threshold <= p.r_max);
        REQUIRE(u.threshold >= p.r_min - 1e-9);
        if (!ev.reseeded) REQUIRE(s.complex().degree(id) > 0);
      }
    }
  }
  CHECK(inserted > 0);
  CHECK(merged > 0);
  CHECK(pruned > 0);
}

TEST_CASE("identical seeds give identical networks") {
  SoamParams p;
  p.manifold_dim = 1;
  p.max_signals = 30'000;
  auto once = [&] {
    ParametricSource src(Circle{}, rescale_transform(shape_bounds(Circle{}), 256), 5);
    Soam s(p, *src.next(), *src.next());
    run(s, src, RunOptions::from(p));
    return format_snapshot(s.snapshot());
  };
  CHECK(once() == once());
}
