#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace soam {

inline constexpr std::size_t kStateCount = 8;

/// Unit counts by state plus network size, sampled between signals.
struct TelemetryFrame {
  std::uint64_t signal = 0;  // signals processed before this frame was taken
  std::array<std::size_t, kStateCount> state_counts{};  // indexed by UnitState
  std::size_t units = 0;
  std::size_t edges = 0;
  std::size_t triangles = 0;
  std::uint64_t insertions = 0;
  std::uint64_t merges = 0;
  std::uint64_t prunes = 0;

  friend bool operator==(const TelemetryFrame&, const TelemetryFrame&) = default;
};

}  // namespace soam
