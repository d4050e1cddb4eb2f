#include "soam/gwr.hpp"

#include <algorithm>
#include <string>

#include "soam/error.hpp"
#include "soam/habituation.hpp"

namespace soam {

GwrParams GwrParams::from(const SoamParams& p) {
  GwrParams g;
  g.insertion_radius = p.r_max;
  g.firing_max = p.firing_max;
  g.firing_threshold = p.firing_threshold;
  g.alpha_h = p.alpha_h;
  g.tau_f = p.tau_f;
  g.tau_f_n = p.tau_f_n;
  g.max_age = p.max_age;
  g.eta_b = p.eta_b;
  g.eta_nb = p.eta_nb;
  g.seed = p.seed;
  g.max_signals = p.max_signals;
  return g;
}

void GwrParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw UsageError(std::string("invalid GWR parameter: ") + what);
  };
  require(insertion_radius > 0.0, "insertion radius must be > 0");
  require(firing_max > 0.0, "F must be > 0");
  require(firing_threshold > 0.0 && firing_threshold < firing_max, "T_f must satisfy 0 < T_f < F");
  require(alpha_h > 0.0 && firing_max - 1.0 / alpha_h < firing_threshold, "F - 1/alpha_h must lie below T_f");
  require(tau_f >= alpha_h && tau_f_n >= alpha_h, "alpha_h / tau must not exceed 1");
  require(max_age >= 1, "T_age must be >= 1");
  require(eta_b > 0.0 && eta_b <= 1.0 && eta_nb > 0.0 && eta_nb <= 1.0, "learning rates must lie in (0, 1]");
  require(quiescence_window >= 1, "quiescence window must be >= 1");
}

Gwr::Gwr(const GwrParams& params, const Point& first, const Point& second)
    : params_(params), dim_(first.dim()), complex_(2), index_(first.dim(), params.insertion_radius) {
  params_.validate();
  if (dim_ < 2 || dim_ > kMaxDim) throw UsageError("ambient dimension must be 2, 3 or 4");
  if (second.dim() != dim_) throw UsageError("initial positions differ in dimension");
  if (!first.finite() || !second.finite()) throw UsageError("initial positions must be finite");
  add_unit(first);
  add_unit(second);
}

const Point& Gwr::position(UnitId id) const {
  if (!complex_.has_vertex(id)) throw UsageError("unknown unit id " + std::to_string(id));
  return pos_[id];
}

double Gwr::firing(UnitId id) const {
  if (!complex_.has_vertex(id)) throw UsageError("unknown unit id " + std::to_string(id));
  return firing_[id];
}

std::vector<Point> Gwr::positions() const {
  std::vector<Point> out;
  for (UnitId id : complex_.vertices()) out.push_back(pos_[id]);
  return out;
}

UnitId Gwr::add_unit(const Point& p) {
  const UnitId id = next_id_++;
  pos_.push_back(p);
  firing_.push_back(params_.firing_max);
  complex_.add_vertex(id);
  index_.insert(id, p);
  return id;
}

void Gwr::remove_unit(UnitId id) {
  complex_.remove_vertex(id);
  index_.remove(id);
}

StepEvents Gwr::process_signal(const Point& xi) {
  if (xi.dim() != dim_) throw UsageError("signal dimension mismatch");
  if (!xi.finite()) throw UsageError("signal must be finite");
  StepEvents ev;
  ++signals_;

  const auto [b, s] = index_.nearest_two(xi);
  ev.winner = b;
  ev.second = s;
  if (complex_.has_edge(b, s)) {
    complex_.set_age(b, s, 0);
    ev.edge_refreshed = true;
  } else {
    complex_.add_edge(b, s);
    ev.edge_created = true;
  }

  std::vector<UnitId> expired;
  for (UnitId x : complex_.neighbors(b)) {
    const int age = complex_.age(b, x) + 1;
    complex_.set_age(b, x, age);
    if (age > params_.max_age) expired.push_back(x);
  }
  for (UnitId x : expired) complex_.remove_edge(b, x);
  ev.edges_pruned = expired.size();
  prunes_ += expired.size();
  for (UnitId x : expired) {
    if (complex_.degree(x) == 0) {
      remove_unit(x);
      ++ev.units_pruned;
    }
  }

  if (habituated(b) && distance(xi, pos_[b]) > params_.insertion_radius) {
    const UnitId n = add_unit(midpoint(pos_[b], xi));
    complex_.add_edge(b, n);
    complex_.add_edge(n, s);
    complex_.remove_edge(b, s);
    ev.unit_inserted = n;
    ++insertions_;
    last_insertion_ = signals_;
  } else {
    const double fb = firing_[b];
    pos_[b] = pos_[b] + (xi - pos_[b]) * (params_.eta_b * fb);
    index_.move(b, pos_[b]);
    for (UnitId x : complex_.neighbors(b)) {
      pos_[x] = pos_[x] + (xi - pos_[x]) * (params_.eta_nb * firing_[x]);
      index_.move(x, pos_[x]);
    }
  }

  firing_[b] = habituate(firing_[b], params_.firing_max, params_.alpha_h, params_.tau_f);
  for (UnitId x : complex_.neighbors(b))
    firing_[x] = habituate(firing_[x], params_.firing_max, params_.alpha_h, params_.tau_f_n);
  return ev;
}

TelemetryFrame Gwr::telemetry() const {
  TelemetryFrame f;
  f.signal = signals_;
  for (UnitId id : complex_.vertices())
    ++f.state_counts[static_cast<std::size_t>(habituated(id) ? UnitState::Habituated : UnitState::Active)];
  f.units = unit_count();
  f.edges = complex_.edge_count();
  f.triangles = complex_.triangle_count();
  f.insertions = insertions_;
  f.prunes = prunes_;
  return f;
}

RunReport run(Gwr& gwr, SignalSource& source, std::uint64_t telemetry_interval) {
  if (source.dim() != gwr.dim()) throw UsageError("signal source dimension differs from the network");
  if (telemetry_interval == 0) throw UsageError("telemetry interval must be >= 1");
  const GwrParams& p = gwr.params();
  RunReport report;
  for (;;) {
    if (gwr.signals_processed() - gwr.last_insertion() >= p.quiescence_window) {
      report.reason = StopReason::Quiescent;
      break;
    }
    if (gwr.signals_processed() >= p.max_signals) {
      report.reason = StopReason::MaxSignals;
      break;
    }
    std::optional<Point> xi = source.next();
    if (!xi) {
      report.reason = StopReason::SourceExhausted;
      break;
    }
    if (gwr.signals_processed() % telemetry_interval == 0) report.telemetry.push_back(gwr.telemetry());
    gwr.process_signal(*xi);
    ++report.signals;
  }
  return report;
}

double coverage_gap(std::span<const Point> units, std::span<const Point> samples) {
  if (units.empty()) throw UsageError("coverage needs at least one unit");
  if (units.size() < 2) {
    double gap = 0.0;
    for (const Point& x : samples) gap = std::max(gap, distance(x, units[0]));
    return gap;
  }
  const double cell = std::max(bounding_box(units).major_extent() / 32.0, 1e-9);
  SpatialIndex index(units.front().dim(), cell);
  for (std::size_t i = 0; i < units.size(); ++i) index.insert(static_cast<UnitId>(i), units[i]);
  double gap = 0.0;
  for (const Point& x : samples) gap = std::max(gap, distance(x, units[index.nearest_two(x).best]));
  return gap;
}

}  // namespace soam
