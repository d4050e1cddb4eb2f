#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "soam/geometry.hpp"

namespace soam {

using UnitId = std::uint32_t;

struct NearestTwo {
  UnitId best;
  UnitId second;
  friend bool operator==(const NearestTwo&, const NearestTwo&) = default;
};

/// Exhaustive scan over `points`, ids are span positions. Ties go to the smaller id.
/// Throws UsageError with fewer than two points.
NearestTwo nearest_two(std::span<const Point> points, const Point& query);

/// Uniform hash grid over a mutating set of identified points.
///
/// Results are identical to an exhaustive scan ordered by (squared distance, id):
/// the ring search only stops once no unvisited cell can hold a point at a
/// distance equal to or below the current second-best. Very sparse or spread-out
/// sets fall back to the scan.
class SpatialIndex {
 public:
  SpatialIndex(std::size_t dim, double cell_size);

  void insert(UnitId id, const Point& p);
  void remove(UnitId id);
  void move(UnitId id, const Point& p);

  bool contains(UnitId id) const { return id < slots_.size() && slots_[id].alive; }
  const Point& position(UnitId id) const { return slots_[id].pos; }
  std::size_t size() const { return size_; }
  std::size_t dim() const { return dim_; }
  double cell_size() const { return cell_; }

  NearestTwo nearest_two(const Point& query) const;
  NearestTwo nearest_two_scan(const Point& query) const;

 private:
  using CellKey = std::array<std::int32_t, kMaxDim>;
  struct CellHash {
    std::size_t operator()(const CellKey& k) const noexcept;
  };
  struct Slot {
    Point pos;
    CellKey cell{};
    bool alive = false;
  };

  CellKey cell_of(const Point& p) const;
  void unlink(UnitId id);

  std::size_t dim_;
  double cell_;
  std::size_t size_ = 0;
  std::vector<Slot> slots_;
  std::unordered_map<CellKey, std::vector<UnitId>, CellHash> cells_;
};

}  // namespace soam
