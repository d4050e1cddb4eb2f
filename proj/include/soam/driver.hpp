#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "soam/io.hpp"
#include "soam/mesh.hpp"
#include "soam/sampling.hpp"
#include "soam/soam.hpp"
#include "soam/verify.hpp"

namespace soam {

/// Inputs are rescaled so that their longest bounding-box side is this long.
inline constexpr double kModelSize = 256.0;

/// Names accepted for `shape` that stand for a generated mesh rather than a
/// parametric surface: "icosphere" (2562 vertices), "torus-mesh", "double-torus-mesh".
std::optional<Mesh> generated_mesh(const std::string& name);

struct PreparedInput {
  std::unique_ptr<SignalSource> source;
  std::optional<Mesh> reference;                // rescaled mesh, when the input is one
  std::optional<SurfaceReport> expected;        // topology the output should have, if known
};

/// Builds the signal source for a configuration. Mesh files and point files
/// (any other extension) are sampled by uniform vertex draws.
PreparedInput prepare_input(const RunConfig& config);

struct Outcome {
  StopReason reason = StopReason::MaxSignals;
  std::uint64_t signals = 0;  // total, including any resumed prefix
  std::vector<TelemetryFrame> telemetry;
  Mesh mesh;
  std::optional<SurfaceReport> surface;
  std::optional<CurveReport> curve;
  std::optional<bool> homeomorphic;   // against the expected topology
  std::optional<double> coverage_gap;  // GWR only, over fresh samples
  std::optional<SoamSnapshot> final_state;  // SOAM only
  bool states_consistent = true;

  /// 0 on stability (quiescence for GWR), 2 otherwise.
  int exit_code() const;
};

/// Runs the configured algorithm. With `resume`, the SOAM continues from the
/// snapshot and the source skips the draws the snapshot has already consumed.
Outcome reconstruct(const RunConfig& config, const SoamSnapshot* resume = nullptr);

/// Effective configuration followed by the results, as key=value lines.
std::string format_outcome(const RunConfig& config, const Outcome& outcome);

/// Writes prefix.off, prefix.telemetry.csv and prefix.report.txt.
void write_outputs(const RunConfig& config, const Outcome& outcome);

}  // namespace soam
