#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soam/mesh.hpp"
#include "soam/soam.hpp"
#include "soam/telemetry.hpp"

namespace soam {

// All writers print reals with 9 significant digits, except snapshots, which
// must round-trip doubles exactly and use 17.

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

/// OFF with triangle faces and, as an extension, two-vertex segment faces.
/// "OFF" carries 3 coordinates per vertex, "4OFF" carries 4. 2-D points are
/// written with z = 0.
Mesh parse_off(std::string_view text);
std::string format_off(const Mesh& mesh);

/// Wavefront OBJ, read-only: v, f (triangles) and l (segments) records.
Mesh parse_obj(std::string_view text);

/// Dispatches on the file extension (.off or .obj).
Mesh load_mesh(const std::string& path);

/// The network as a mesh: units in ascending id order, every triangle, and
/// every edge not covered by a triangle as a segment.
Mesh to_mesh(const Soam& soam);

/// One point per line, whitespace-separated coordinates, '#' comments.
std::vector<Point> parse_points(std::string_view text);
std::string format_points(std::span<const Point> points);

inline constexpr std::string_view kTelemetryHeader =
    "signal,active,habituated,connected,halfdisk,disk,boundary,patch,singular,units,edges,triangles,"
    "insertions,merges,prunes";

std::string format_telemetry_row(const TelemetryFrame& frame);
/// Header plus one row per frame.
std::string format_telemetry(std::span<const TelemetryFrame> frames);
std::vector<TelemetryFrame> parse_telemetry(std::string_view text);

enum class Algorithm { Soam, Gwr };

/// Everything a reconstruct run needs besides the signals themselves.
struct RunConfig {
  SoamParams params;
  std::string input;     // mesh file; empty when a shape is sampled
  std::string shape;     // parametric shape name; empty when a mesh is read
  double noise = 0.0;
  std::string out = "soam";
  std::uint64_t telemetry_interval = 1000;
  Algorithm algorithm = Algorithm::Soam;

  /// Throws UsageError on inconsistent settings.
  void validate() const;
};

/// Applies `key = value` lines on top of `base`. Unknown or repeated keys and
/// unparsable values are FormatErrors carrying the line number.
RunConfig parse_config(std::string_view text, const RunConfig& base = {});
std::string format_config(const RunConfig& config);
/// Sets one key; returns false if the key is unknown. Throws UsageError on a bad value.
bool set_config_value(RunConfig& config, std::string_view key, std::string_view value);

/// Versioned, lossless text form of a Soam state ("SOAMSNAP 1").
std::string format_snapshot(const SoamSnapshot& snap);
/// Triangles listed in the text must match the 3-cliques of its edges.
SoamSnapshot parse_snapshot(std::string_view text);

}  // namespace soam
