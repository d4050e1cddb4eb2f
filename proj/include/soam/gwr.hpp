#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "soam/geometry.hpp"
#include "soam/simplicial.hpp"
#include "soam/soam.hpp"
#include "soam/spatial_index.hpp"
#include "soam/telemetry.hpp"

namespace soam {

/// Grow When Required: the growing network SOAM extends, with a fixed insertion
/// radius and no topological states.
struct GwrParams {
  double insertion_radius = 25.0;  // R_g
  double firing_max = 1.0;
  double firing_threshold = 0.243;
  double alpha_h = 1.05;
  double tau_f = 3.33;
  double tau_f_n = 14.33;
  int max_age = 30;
  double eta_b = 0.05;
  double eta_nb = 0.0005;
  std::uint64_t seed = 1;
  std::uint64_t max_signals = 20'000'000;
  std::uint64_t quiescence_window = 100'000;  // signals without an insertion

  /// The shared fields of a SOAM configuration, with R as the insertion radius.
  static GwrParams from(const SoamParams& p);
  void validate() const;
};

class Gwr {
 public:
  Gwr(const GwrParams& params, const Point& first, const Point& second);

  /// Only winner, second, edge and insertion fields of the result are used.
  StepEvents process_signal(const Point& xi);

  const GwrParams& params() const { return params_; }
  std::size_t dim() const { return dim_; }
  const SimplicialComplex& complex() const { return complex_; }
  const Point& position(UnitId id) const;
  double firing(UnitId id) const;
  std::vector<UnitId> unit_ids() const { return complex_.vertices(); }
  std::vector<Point> positions() const;
  std::size_t unit_count() const { return complex_.vertex_count(); }

  std::uint64_t signals_processed() const { return signals_; }
  std::uint64_t insertions() const { return insertions_; }
  std::uint64_t prunes() const { return prunes_; }
  std::uint64_t last_insertion() const { return last_insertion_; }

  /// Units split into active / habituated by firing; the other state columns stay 0.
  TelemetryFrame telemetry() const;

 private:
  bool habituated(UnitId id) const { return firing_[id] <= params_.firing_threshold; }
  UnitId add_unit(const Point& p);
  void remove_unit(UnitId id);

  GwrParams params_;
  std::size_t dim_;
  SimplicialComplex complex_;
  SpatialIndex index_;
  std::vector<Point> pos_;
  std::vector<double> firing_;
  UnitId next_id_ = 0;
  std::uint64_t signals_ = 0;
  std::uint64_t insertions_ = 0;
  std::uint64_t prunes_ = 0;
  std::uint64_t last_insertion_ = 0;
};

/// Feeds the network until quiescence_window signals pass without an insertion,
/// max_signals, or the end of the source.
RunReport run(Gwr& gwr, SignalSource& source, std::uint64_t telemetry_interval = 1000);

/// Largest distance from a sample to its nearest unit. The network covers the
/// samples when this is at most the insertion radius.
double coverage_gap(std::span<const Point> units, std::span<const Point> samples);

}  // namespace soam
