#include "soam/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "soam/error.hpp"

namespace soam {

namespace {

struct Candidate {
  double d2 = std::numeric_limits<double>::infinity();
  UnitId id = std::numeric_limits<UnitId>::max();

  bool beats(const Candidate& o) const { return d2 < o.d2 || (d2 == o.d2 && id < o.id); }
};

struct TopTwo {
  Candidate first, second;

  void offer(const Candidate& c) {
    if (c.beats(first)) {
      second = first;
      first = c;
    } else if (c.beats(second)) {
      second = c;
    }
  }
};

}  // namespace

NearestTwo nearest_two(std::span<const Point> points, const Point& query) {
  if (points.size() < 2) throw UsageError("nearest_two needs at least two points");
  TopTwo top;
  for (std::size_t i = 0; i < points.size(); ++i)
    top.offer({distance_squared(points[i], query), static_cast<UnitId>(i)});
  return {top.first.id, top.second.id};
}

std::size_t SpatialIndex::CellHash::operator()(const CellKey& k) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (std::int32_t v : k) {
    h ^= static_cast<std::uint32_t>(v);
    h *= 1099511628211ull;
  }
  return h;
}

SpatialIndex::SpatialIndex(std::size_t dim, double cell_size) : dim_(dim), cell_(cell_size) {
  if (dim == 0 || dim > kMaxDim) throw UsageError("index dimension must be in 1..4");
  if (!(cell_size > 0.0)) throw UsageError("index cell size must be positive");
}

SpatialIndex::CellKey SpatialIndex::cell_of(const Point& p) const {
  CellKey k{};
  for (std::size_t i = 0; i < dim_; ++i) {
    const double c = std::floor(p[i] / cell_);
    k[i] = static_cast<std::int32_t>(std::clamp(c, -1.0e9, 1.0e9));
  }
  return k;
}

void SpatialIndex::insert(UnitId id, const Point& p) {
  if (p.dim() != dim_) throw UsageError("index insert: dimension mismatch");
  if (contains(id)) throw UsageError("index insert: id " + std::to_string(id) + " already present");
  if (id >= slots_.size()) slots_.resize(id + 1);
  Slot& s = slots_[id];
  s.pos = p;
  s.cell = cell_of(p);
  s.alive = true;
  cells_[s.cell].push_back(id);
  ++size_;
}

void SpatialIndex::unlink(UnitId id) {
  auto it = cells_.find(slots_[id].cell);
  auto& ids = it->second;
  ids.erase(std::find(ids.begin(), ids.end(), id));
  if (ids.empty()) cells_.erase(it);
}

void SpatialIndex::remove(UnitId id) {
  if (!contains(id)) throw UsageError("index remove: unknown id " + std::to_string(id));
  unlink(id);
  slots_[id].alive = false;
  --size_;
}

void SpatialIndex::move(UnitId id, const Point& p) {
  if (!contains(id)) throw UsageError("index move: unknown id " + std::to_string(id));
  if (p.dim() != dim_) throw UsageError("index move: dimension mismatch");
  Slot& s = slots_[id];
  s.pos = p;
  const CellKey k = cell_of(p);
  if (k != s.cell) {
    unlink(id);
    s.cell = k;
    cells_[k].push_back(id);
  }
}

NearestTwo SpatialIndex::nearest_two_scan(const Point& query) const {
  if (size_ < 2) throw UsageError("nearest_two needs at least two points");
  if (query.dim() != dim_) throw UsageError("nearest_two: dimension mismatch");
  TopTwo top;
  for (UnitId id = 0; id < slots_.size(); ++id)
    if (slots_[id].alive) top.offer({distance_squared(slots_[id].pos, query), id});
  return {top.first.id, top.second.id};
}

NearestTwo SpatialIndex::nearest_two(const Point& query) const {
  if (size_ < 2) throw UsageError("nearest_two needs at least two points");
  if (query.dim() != dim_) throw UsageError("nearest_two: dimension mismatch");
  if (size_ < 32) return nearest_two_scan(query);

  const CellKey center = cell_of(query);
  TopTwo top;
  std::array<std::int32_t, kMaxDim> off{};
  for (std::int32_t ring = 0;; ++ring) {
    // Give up on the grid once a ring holds more cells than there are points.
    double ring_cells = 1.0;
    for (std::size_t i = 0; i < dim_; ++i) ring_cells *= 2.0 * ring + 1.0;
    if (ring > 0 && ring_cells > 4.0 * static_cast<double>(size_)) return nearest_two_scan(query);

    // Visit every cell at Chebyshev distance exactly `ring`.
    std::fill(off.begin(), off.end(), 0);
    for (std::size_t i = 0; i < dim_; ++i) off[i] = -ring;
    for (;;) {
      std::int32_t cheb = 0;
      for (std::size_t i = 0; i < dim_; ++i) cheb = std::max(cheb, std::abs(off[i]));
      if (cheb == ring) {
        CellKey key = center;
        for (std::size_t i = 0; i < dim_; ++i) key[i] += off[i];
        if (auto it = cells_.find(key); it != cells_.end())
          for (UnitId id : it->second) top.offer({distance_squared(slots_[id].pos, query), id});
      }
      std::size_t i = 0;
      for (; i < dim_; ++i) {
        if (off[i] < ring) {
          ++off[i];
          break;
        }
        off[i] = -ring;
      }
      if (i == dim_) break;
    }

    if (top.second.id == std::numeric_limits<UnitId>::max()) continue;
    // Distance from the query to the outside of the visited block of cells.
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dim_; ++i) {
      const double lo = query[i] - (static_cast<double>(center[i]) - ring) * cell_;
      const double hi = (static_cast<double>(center[i]) + ring + 1) * cell_ - query[i];
      bound = std::min({bound, lo, hi});
    }
    bound -= 1e-9 * (1.0 + std::abs(bound) + cell_);
    if (bound > 0.0 && top.second.d2 < bound * bound) return {top.first.id, top.second.id};
  }
}

}  // namespace soam
