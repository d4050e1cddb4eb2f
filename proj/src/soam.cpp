#include "soam/soam.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "soam/error.hpp"
#include "soam/habituation.hpp"

namespace soam {

namespace {

constexpr std::array<std::string_view, kStateCount> kStateNames = {
    "active", "habituated", "connected", "halfdisk", "disk", "boundary", "patch", "singular"};

constexpr std::uint64_t kIdleSweepPeriod = 1024;

std::size_t idx(UnitState s) { return static_cast<std::size_t>(s); }

void require(bool ok, const char* field, const char* rule) {
  if (!ok) throw UsageError(std::string("invalid parameter ") + field + ": " + rule);
}

}  // namespace

std::string_view to_string(UnitState s) { return kStateNames[idx(s)]; }

std::optional<UnitState> parse_unit_state(std::string_view name) {
  for (std::size_t i = 0; i < kStateCount; ++i)
    if (kStateNames[i] == name) return static_cast<UnitState>(i);
  return std::nullopt;
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Stable: return "stable";
    case StopReason::MaxSignals: return "max-signals";
    case StopReason::SourceExhausted: return "source-exhausted";
    case StopReason::Quiescent: return "quiescent";
  }
  return "?";
}

void SoamParams::validate() const {
  require(manifold_dim == 1 || manifold_dim == 2, "dim", "must be 1 or 2");
  require(firing_max > 0.0, "F", "must be > 0");
  require(firing_threshold > 0.0 && firing_threshold < firing_max, "T_f", "must satisfy 0 < T_f < F");
  require(alpha_h > 0.0, "alpha_h", "must be > 0");
  require(firing_max - 1.0 / alpha_h < firing_threshold, "alpha_h", "F - 1/alpha_h must lie below T_f");
  require(tau_f > 0.0 && tau_f_n > 0.0, "tau_f", "time constants must be > 0");
  require(alpha_h <= tau_f && alpha_h <= tau_f_n, "tau_f", "alpha_h / tau must not exceed 1");
  require(r_min > 0.0 && r_min < r_max, "r_min", "must satisfy 0 < r_min < R");
  require(alpha_r >= 0.0, "alpha_r", "must be >= 0");
  require(tau_r_hab > 0.0 && tau_r_dis > 0.0, "tau_r", "time constants must be > 0");
  require(effective_alpha_r() <= tau_r_hab && effective_alpha_r() <= tau_r_dis, "alpha_r",
          "alpha_r / tau must not exceed 1");
  require(max_age >= 1, "T_age", "must be >= 1");
  require(eta_b > 0.0 && eta_b <= 1.0, "eta_b", "must lie in (0, 1]");
  require(eta_nb > 0.0 && eta_nb <= 1.0, "eta_nb", "must lie in (0, 1]");
  require(eta_stable > 0.0 && eta_stable <= 1.0, "eta_stable", "must lie in (0, 1]");
  require(idle_factor > 0.0, "idle_factor", "must be > 0");
  require(stability_window >= 1, "stability_window", "must be >= 1");
}

double adapt_firing(double f, Role role, const SoamParams& p) {
  return habituate(f, p.firing_max, p.alpha_h, role == Role::Winner ? p.tau_f : p.tau_f_n);
}

double adapt_threshold(double r, UnitState state, const SoamParams& p) {
  if (state == UnitState::Singular) return habituate(r, p.r_max, p.effective_alpha_r(), p.tau_r_hab);
  if (is_regular(state)) return dishabituate(r, p.r_max, p.effective_alpha_r(), p.tau_r_dis);
  return r;
}

Soam::Soam(RestoreTag, const SoamParams& params, std::size_t dim)
    : params_(params), dim_(dim), complex_(params.manifold_dim), index_(dim, params.r_max) {
  params_.validate();
  if (dim < 2 || dim > kMaxDim) throw UsageError("ambient dimension must be 2, 3 or 4");
}

Soam::Soam(const SoamParams& params, const Point& first, const Point& second)
    : Soam(RestoreTag{}, params, first.dim()) {
  if (second.dim() != dim_) throw UsageError("initial positions differ in dimension");
  if (!first.finite() || !second.finite()) throw UsageError("initial positions must be finite");
  add_unit(first);
  add_unit(second);
  dirty_topology_.clear();
}

const Unit& Soam::unit(UnitId id) const {
  if (!complex_.has_vertex(id)) throw UsageError("unknown unit id " + std::to_string(id));
  return units_[id];
}

UnitId Soam::add_unit(const Point& p) {
  const UnitId id = next_id_++;
  units_.resize(next_id_);
  base_.resize(next_id_, UnitState::Active);
  units_[id] = Unit{p, params_.firing_max, params_.r_max, UnitState::Active, signals_};
  base_[id] = UnitState::Active;
  complex_.add_vertex(id);
  index_.insert(id, p);
  ++counts_[idx(UnitState::Active)];
  return id;
}

void Soam::remove_unit(UnitId id) {
  --counts_[idx(units_[id].state)];
  complex_.remove_vertex(id);
  index_.remove(id);
}

void Soam::mark_edge_region(UnitId a, UnitId b) {
  dirty_topology_.push_back(a);
  dirty_topology_.push_back(b);
  for (UnitId n : complex_.common_neighbors(a, b)) dirty_topology_.push_back(n);
}

bool Soam::connect(UnitId a, UnitId b, int age) {
  if (complex_.has_edge(a, b)) {
    complex_.add_edge_with_age(a, b, age);
    return false;
  }
  complex_.add_edge_with_age(a, b, age);
  mark_edge_region(a, b);
  return true;
}

void Soam::disconnect(UnitId a, UnitId b) {
  if (!complex_.has_edge(a, b)) return;
  mark_edge_region(a, b);
  complex_.remove_edge(a, b);
}

void Soam::set_firing(UnitId id, double f) {
  const bool before = habituated(id);
  units_[id].firing = f;
  if (habituated(id) != before) dirty_firing_.push_back(id);
}

void Soam::set_position(UnitId id, const Point& p) {
  units_[id].position = p;
  index_.move(id, p);
}

void Soam::set_state(UnitId id, UnitState s, StepEvents* ev) {
  UnitState& cur = units_[id].state;
  if (cur == s) return;
  if (ev) ev->state_changes.push_back({id, cur, s});
  --counts_[idx(cur)];
  ++counts_[idx(s)];
  cur = s;
}

UnitState Soam::base_state(UnitId id) const {
  if (!habituated(id)) return UnitState::Active;
  const auto& nbrs = complex_.neighbors(id);
  if (!std::all_of(nbrs.begin(), nbrs.end(), [&](UnitId n) { return habituated(n); }))
    return UnitState::Habituated;
  switch (classify_link(complex_.link_of(id), params_.manifold_dim)) {
    case LinkClass::Path: return UnitState::HalfDisk;
    case LinkClass::Cycle: return UnitState::Disk;
    case LinkClass::Cycle3:
    case LinkClass::Overconnected: return UnitState::Singular;
    case LinkClass::Empty:
    case LinkClass::Underconnected: break;
  }
  return UnitState::Connected;
}

UnitState Soam::promote(UnitState base, bool neighbors_regular) {
  if (!neighbors_regular) return base;
  if (base == UnitState::HalfDisk) return UnitState::Boundary;
  if (base == UnitState::Disk) return UnitState::Patch;
  return base;
}

UnitState Soam::compute_state(UnitId id) const {
  if (!complex_.has_vertex(id)) throw UsageError("unknown unit id " + std::to_string(id));
  const auto& nbrs = complex_.neighbors(id);
  const bool regular_ring =
      std::all_of(nbrs.begin(), nbrs.end(), [&](UnitId n) { return is_regular(base_state(n)); });
  return promote(base_state(id), regular_ring);
}

bool Soam::states_consistent() const {
  std::array<std::size_t, kStateCount> counts{};
  for (UnitId id : complex_.vertices()) {
    if (units_[id].state != compute_state(id)) return false;
    ++counts[idx(units_[id].state)];
  }
  return counts == counts_;
}

void Soam::refresh_states(StepEvents* ev) {
  if (dirty_topology_.empty() && dirty_firing_.empty()) return;
  // Base states depend on a unit's own firing, its link, and its neighbours' firing.
  std::vector<UnitId> base_set = dirty_topology_;
  for (UnitId id : dirty_firing_) {
    if (!complex_.has_vertex(id)) continue;
    base_set.push_back(id);
    for (UnitId n : complex_.neighbors(id)) base_set.push_back(n);
  }
  dirty_topology_.clear();
  dirty_firing_.clear();
  std::sort(base_set.begin(), base_set.end());
  base_set.erase(std::unique(base_set.begin(), base_set.end()), base_set.end());
  std::erase_if(base_set, [&](UnitId id) { return !complex_.has_vertex(id); });

  // Final states additionally depend on the regularity of neighbours' base states.
  std::vector<UnitId> final_set = base_set;
  for (UnitId id : base_set) {
    const UnitState nb = base_state(id);
    if (is_regular(nb) != is_regular(base_[id]))
      for (UnitId n : complex_.neighbors(id)) final_set.push_back(n);
    base_[id] = nb;
  }
  std::sort(final_set.begin(), final_set.end());
  final_set.erase(std::unique(final_set.begin(), final_set.end()), final_set.end());
  for (UnitId id : final_set) {
    const auto& nbrs = complex_.neighbors(id);
    const bool regular_ring =
        std::all_of(nbrs.begin(), nbrs.end(), [&](UnitId n) { return is_regular(base_[n]); });
    set_state(id, promote(base_[id], regular_ring), ev);
  }
}

void Soam::merge_into(UnitId keep, UnitId gone) {
  set_position(keep, midpoint(units_[keep].position, units_[gone].position));
  const std::vector<UnitId> nbrs = complex_.neighbors(gone);
  for (UnitId x : nbrs) {
    if (x == keep) continue;
    const int age = complex_.age(gone, x);
    connect(keep, x, complex_.has_edge(keep, x) ? std::max(age, complex_.age(keep, x)) : age);
  }
  for (UnitId x : nbrs) disconnect(gone, x);
  remove_unit(gone);
}

std::size_t Soam::remove_idle_units(UnitId b, UnitId s) {
  if (signals_ % kIdleSweepPeriod != 0) return 0;
  const auto limit = static_cast<std::uint64_t>(params_.idle_factor * static_cast<double>(unit_count()));
  std::vector<UnitId> idle;
  for (UnitId id : complex_.vertices())
    if (id != b && id != s && signals_ - units_[id].last_won > limit) idle.push_back(id);
  std::size_t removed = 0;
  for (UnitId id : idle) {
    if (!complex_.has_vertex(id)) continue;
    const std::vector<UnitId> nbrs = complex_.neighbors(id);
    for (UnitId x : nbrs) disconnect(id, x);
    remove_unit(id);
    ++removed;
    for (UnitId x : nbrs) {
      if (x != b && x != s && complex_.has_vertex(x) && complex_.degree(x) == 0) {
        remove_unit(x);
        ++removed;
      }
    }
  }
  return removed;
}

StepEvents Soam::process_signal(const Point& xi) {
  if (xi.dim() != dim_) throw UsageError("signal dimension mismatch");
  if (!xi.finite()) throw UsageError("signal must be finite");
  StepEvents ev;
  ++signals_;

  // Winner and runner-up.
  const auto [b, s] = index_.nearest_two(xi);
  ev.winner = b;
  ev.second = s;
  units_[b].last_won = signals_;

  // Competitive Hebbian connection.
  if (connect(b, s)) {
    ev.edge_created = true;
  } else {
    complex_.set_age(b, s, 0);
    ev.edge_refreshed = true;
  }
  refresh_states(&ev);

  // Aging and pruning, frozen around stable winners.
  if (!is_stable(units_[b].state)) {
    std::vector<UnitId> expired;
    for (UnitId x : complex_.neighbors(b)) {
      const int age = complex_.age(b, x) + 1;
      complex_.set_age(b, x, age);
      if (age > params_.max_age) expired.push_back(x);
    }
    for (UnitId x : expired) disconnect(b, x);
    ev.edges_pruned = expired.size();
    prunes_ += expired.size();
    for (UnitId x : expired) {
      if (complex_.degree(x) == 0) {
        remove_unit(x);
        ++ev.units_pruned;
      }
    }
  }
  ev.units_idle_removed = remove_idle_units(b, s);

  // Insertion or merge.
  bool winner_gone = false;
  if (habituated(b)) {
    if (distance(xi, units_[b].position) > units_[b].threshold) {
      const UnitId n = add_unit(midpoint(units_[b].position, xi));
      connect(b, n);
      connect(n, s);
      disconnect(b, s);
      ev.unit_inserted = n;
      ++insertions_;
    } else if (distance(units_[s].position, units_[b].position) < params_.r_min) {
      merge_into(b, s);
      ev.units_merged = {b, s};
      ++merges_;
      if (complex_.degree(b) == 0) {
        remove_unit(b);
        winner_gone = true;
      }
    }
  }
  while (unit_count() < 2) {
    add_unit(xi);
    ev.reseeded = true;
  }
  if (winner_gone) {
    refresh_states(&ev);
    stable_streak_ = all_stable() ? stable_streak_ + 1 : 0;
    return ev;
  }

  // Firing counters.
  set_firing(b, adapt_firing(units_[b].firing, Role::Winner, params_));
  for (UnitId x : complex_.neighbors(b)) set_firing(x, adapt_firing(units_[x].firing, Role::Neighbor, params_));

  // States.
  refresh_states(&ev);

  // Insertion threshold of the winner.
  units_[b].threshold = adapt_threshold(units_[b].threshold, units_[b].state, params_);

  // Positions.
  const Unit& ub = units_[b];
  if (is_stable(ub.state)) {
    set_position(b, ub.position + (xi - ub.position) * (params_.eta_stable * ub.firing));
  } else {
    set_position(b, ub.position + (xi - ub.position) * (params_.eta_b * ub.firing));
    for (UnitId x : complex_.neighbors(b)) {
      const Unit& ux = units_[x];
      set_position(x, ux.position + (xi - ux.position) * (params_.eta_nb * ux.firing));
    }
  }

  stable_streak_ = all_stable() ? stable_streak_ + 1 : 0;
  return ev;
}

TelemetryFrame Soam::telemetry() const {
  TelemetryFrame f;
  f.signal = signals_;
  f.state_counts = counts_;
  f.units = unit_count();
  f.edges = complex_.edge_count();
  f.triangles = complex_.triangle_count();
  f.insertions = insertions_;
  f.merges = merges_;
  f.prunes = prunes_;
  return f;
}

SoamSnapshot Soam::snapshot() const {
  SoamSnapshot s;
  s.params = params_;
  s.dim = dim_;
  s.signals = signals_;
  s.stable_streak = stable_streak_;
  s.insertions = insertions_;
  s.merges = merges_;
  s.prunes = prunes_;
  s.next_id = next_id_;
  for (UnitId id : complex_.vertices()) s.units.emplace_back(id, units_[id]);
  s.edges = complex_.edges();
  return s;
}

Soam Soam::from_snapshot(const SoamSnapshot& snap) {
  Soam m(RestoreTag{}, snap.params, snap.dim);
  m.signals_ = snap.signals;
  m.stable_streak_ = snap.stable_streak;
  m.insertions_ = snap.insertions;
  m.merges_ = snap.merges;
  m.prunes_ = snap.prunes;
  m.units_.resize(snap.next_id);
  m.base_.resize(snap.next_id, UnitState::Active);
  for (const auto& [id, u] : snap.units) {
    if (id >= snap.next_id) throw UsageError("snapshot unit id " + std::to_string(id) + " >= next id");
    if (u.position.dim() != snap.dim || !u.position.finite())
      throw UsageError("snapshot unit " + std::to_string(id) + " has a bad position");
    m.units_[id] = u;
    m.complex_.add_vertex(id);
    m.index_.insert(id, u.position);
    ++m.counts_[idx(u.state)];
  }
  m.next_id_ = snap.next_id;
  for (const auto& [e, age] : snap.edges) {
    if (!m.complex_.has_vertex(e.a) || !m.complex_.has_vertex(e.b) || e.a == e.b)
      throw UsageError("snapshot edge " + std::to_string(e.a) + "-" + std::to_string(e.b) + " is invalid");
    if (!m.complex_.add_edge_with_age(e.a, e.b, age))
      throw UsageError("snapshot edge " + std::to_string(e.a) + "-" + std::to_string(e.b) + " is duplicated");
  }
  if (m.unit_count() < 2) throw UsageError("snapshot holds fewer than two units");
  for (UnitId id : m.complex_.vertices()) m.base_[id] = m.base_state(id);
  for (UnitId id : m.complex_.vertices())
    if (m.units_[id].state != m.compute_state(id))
      throw UsageError("snapshot state of unit " + std::to_string(id) + " disagrees with its topology");
  return m;
}

RunReport run(Soam& soam, SignalSource& source, const RunOptions& options) {
  if (source.dim() != soam.dim()) throw UsageError("signal source dimension differs from the network");
  if (options.telemetry_interval == 0) throw UsageError("telemetry interval must be >= 1");
  RunReport report;
  for (;;) {
    if (options.stability_window > 0 && soam.stable_streak() >= options.stability_window) {
      report.reason = StopReason::Stable;
      break;
    }
    if (soam.signals_processed() >= options.max_signals) {
      report.reason = StopReason::MaxSignals;
      break;
    }
    std::optional<Point> xi = source.next();
    if (!xi) {
      report.reason = StopReason::SourceExhausted;
      break;
    }
    if (soam.signals_processed() % options.telemetry_interval == 0) report.telemetry.push_back(soam.telemetry());
    soam.process_signal(*xi);
    ++report.signals;
  }
  return report;
}

}  // namespace soam
