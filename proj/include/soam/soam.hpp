#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "soam/geometry.hpp"
#include "soam/simplicial.hpp"
#include "soam/spatial_index.hpp"
#include "soam/telemetry.hpp"

namespace soam {

/// Topological state of a unit. Recomputed from the network, never latched.
enum class UnitState : std::uint8_t { Active, Habituated, Connected, HalfDisk, Disk, Boundary, Patch, Singular };

std::string_view to_string(UnitState s);
std::optional<UnitState> parse_unit_state(std::string_view name);

inline bool is_regular(UnitState s) {
  return s == UnitState::HalfDisk || s == UnitState::Disk || s == UnitState::Boundary || s == UnitState::Patch;
}
inline bool is_stable(UnitState s) { return s == UnitState::Patch; }

struct SoamParams {
  int manifold_dim = 2;
  double firing_max = 1.0;               // F
  double firing_threshold = 0.243;       // T_f; habituated once f <= T_f
  double alpha_h = 1.05;
  double tau_f = 3.33;                   // winner
  double tau_f_n = 14.33;                // neighbours of the winner
  double r_max = 25.0;                   // R
  double r_min = 0.5;
  double alpha_r = 0.0;                  // 0 selects 1 / (R - r_min)
  double tau_r_hab = 3.0;
  double tau_r_dis = 9.0;
  int max_age = 30;                      // T_age
  double eta_b = 0.05;
  double eta_nb = 0.0005;
  double eta_stable = 0.02;
  // A unit that has not won for idle_factor * |L| signals owns no part of the
  // input and is removed.
  double idle_factor = 100.0;
  std::uint64_t seed = 1;
  std::uint64_t max_signals = 20'000'000;
  std::uint64_t stability_window = 10'000;

  double effective_alpha_r() const { return alpha_r > 0.0 ? alpha_r : 1.0 / (r_max - r_min); }
  /// Throws UsageError naming the first offending field.
  void validate() const;

  friend bool operator==(const SoamParams&, const SoamParams&) = default;
};

enum class Role { Winner, Neighbor };

/// Firing counter after one signal.
double adapt_firing(double f, Role role, const SoamParams& p);
/// Insertion threshold after one signal: singular units habituate, regular ones recover.
double adapt_threshold(double r, UnitState state, const SoamParams& p);

struct Unit {
  Point position;
  double firing = 0.0;
  double threshold = 0.0;
  UnitState state = UnitState::Active;
  std::uint64_t last_won = 0;  // signal index when last winner (or created)
};

struct StateChange {
  UnitId id;
  UnitState from;
  UnitState to;
};

/// Mutations performed by one process_signal call.
struct StepEvents {
  UnitId winner = 0;
  UnitId second = 0;
  bool edge_created = false;
  bool edge_refreshed = false;
  std::optional<UnitId> unit_inserted;
  std::optional<std::pair<UnitId, UnitId>> units_merged;  // (kept, removed)
  std::size_t edges_pruned = 0;
  std::size_t units_pruned = 0;
  std::size_t units_idle_removed = 0;
  bool reseeded = false;
  std::vector<StateChange> state_changes;
};

/// Everything needed to rebuild a Soam bit-for-bit.
struct SoamSnapshot {
  SoamParams params;
  std::size_t dim = 0;
  std::uint64_t signals = 0;
  std::uint64_t stable_streak = 0;
  std::uint64_t insertions = 0;
  std::uint64_t merges = 0;
  std::uint64_t prunes = 0;
  UnitId next_id = 0;
  std::vector<std::pair<UnitId, Unit>> units;  // ascending id
  std::vector<std::pair<EdgeKey, int>> edges;  // ascending key
};

/// A self-organizing adaptive map: a growing network that adapts a simplicial
/// complex to a stream of samples until every unit's neighbourhood is a disk
/// of the expected dimension.
class Soam {
 public:
  Soam(const SoamParams& params, const Point& first, const Point& second);

  /// Rebuilds a network. Throws UsageError if stored states disagree with the topology.
  static Soam from_snapshot(const SoamSnapshot& snap);
  SoamSnapshot snapshot() const;

  StepEvents process_signal(const Point& xi);

  const SoamParams& params() const { return params_; }
  std::size_t dim() const { return dim_; }
  const SimplicialComplex& complex() const { return complex_; }
  const Unit& unit(UnitId id) const;
  std::vector<UnitId> unit_ids() const { return complex_.vertices(); }
  std::size_t unit_count() const { return complex_.vertex_count(); }

  std::uint64_t signals_processed() const { return signals_; }
  std::uint64_t stable_streak() const { return stable_streak_; }
  std::uint64_t insertions() const { return insertions_; }
  std::uint64_t merges() const { return merges_; }
  std::uint64_t prunes() const { return prunes_; }
  const std::array<std::size_t, kStateCount>& state_counts() const { return counts_; }
  bool all_stable() const { return counts_[static_cast<std::size_t>(UnitState::Patch)] == unit_count(); }

  /// State of `id` computed from scratch from firing counters and topology.
  UnitState compute_state(UnitId id) const;
  /// True when every stored state equals compute_state.
  bool states_consistent() const;

  TelemetryFrame telemetry() const;

 private:
  struct RestoreTag {};
  Soam(RestoreTag, const SoamParams& params, std::size_t dim);

  bool habituated(UnitId id) const { return units_[id].firing <= params_.firing_threshold; }
  UnitState base_state(UnitId id) const;
  static UnitState promote(UnitState base, bool neighbors_regular);

  UnitId add_unit(const Point& p);
  void remove_unit(UnitId id);
  bool connect(UnitId a, UnitId b, int age = 0);
  void disconnect(UnitId a, UnitId b);
  void mark_edge_region(UnitId a, UnitId b);
  void set_firing(UnitId id, double f);
  void set_position(UnitId id, const Point& p);
  void set_state(UnitId id, UnitState s, StepEvents* ev);
  void refresh_states(StepEvents* ev);
  void merge_into(UnitId keep, UnitId gone);
  std::size_t remove_idle_units(UnitId b, UnitId s);

  SoamParams params_;
  std::size_t dim_;
  SimplicialComplex complex_;
  SpatialIndex index_;
  std::vector<Unit> units_;         // indexed by id; dead slots are stale
  std::vector<UnitState> base_;     // state before the neighbour-regularity promotion
  std::array<std::size_t, kStateCount> counts_{};
  std::vector<UnitId> dirty_topology_;
  std::vector<UnitId> dirty_firing_;
  UnitId next_id_ = 0;
  std::uint64_t signals_ = 0;
  std::uint64_t stable_streak_ = 0;
  std::uint64_t insertions_ = 0;
  std::uint64_t merges_ = 0;
  std::uint64_t prunes_ = 0;
};

/// Yields input samples. An empty optional means the stream is exhausted.
class SignalSource {
 public:
  virtual ~SignalSource() = default;
  virtual std::optional<Point> next() = 0;
  virtual std::size_t dim() const = 0;
};

/// Quiescent is used by the GWR baseline: no insertion for a whole window.
enum class StopReason { Stable, MaxSignals, SourceExhausted, Quiescent };
std::string_view to_string(StopReason r);

struct RunOptions {
  std::uint64_t max_signals = 0;       // total signals, counted across resumes
  std::uint64_t stability_window = 0;  // consecutive all-stable signals
  std::uint64_t telemetry_interval = 1000;

  static RunOptions from(const SoamParams& p, std::uint64_t telemetry_interval = 1000) {
    return {p.max_signals, p.stability_window, telemetry_interval};
  }
};

struct RunReport {
  StopReason reason = StopReason::MaxSignals;
  std::uint64_t signals = 0;  // processed during this call
  std::vector<TelemetryFrame> telemetry;
};

/// Feeds the network until max_signals, stability held for the window, or source end.
/// A frame is taken before each signal whose global index is a multiple of the interval.
RunReport run(Soam& soam, SignalSource& source, const RunOptions& options);

}  // namespace soam
