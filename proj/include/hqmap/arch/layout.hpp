#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hqmap/arch/geometry.hpp"

namespace hqmap {

// Region footprint for a module holding n_params + n_locals qubits. Kept as
// square as possible, but never narrower than the parameter row: parameters
// must all sit on the boundary row that faces the bus.
struct region_shape {
  uint32_t width = 0;
  uint32_t height = 0;

  uint32_t cells() const { return width * height; }
  bool operator==(const region_shape&) const = default;
};

inline region_shape region_shape_for(uint32_t n_params, uint32_t n_locals) {
  uint32_t n = n_params + n_locals;
  if (n == 0) return {};
  auto w = static_cast<uint32_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  if (w < n_params) w = n_params;
  uint32_t h = (n + w - 1) / w;
  return {w, h};
}

// Cell of region slot `i` (parameters first, then locals, then padding) for
// a region whose lower-left corner is (x0, y0). Fills row by row starting at
// the bus-facing row.
inline cell region_cell(region_shape s, int32_t x0, int32_t y0, uint32_t i) {
  return {x0 + static_cast<int32_t>(i % s.width), y0 + static_cast<int32_t>(i / s.width)};
}

// Hop count for carrying a qubit between two region cells through bus lane
// `lane`: descend to the strip, run along it, climb back up. Lane 0 is the
// row touching the regions; deeper lanes cost two extra vertical hops each.
inline int64_t passing_distance(cell from, cell to, int32_t bus_rows, uint32_t lane = 0) {
  int64_t down = from.y - bus_rows + 1;
  int64_t up = to.y - bus_rows + 1;
  return down + std::abs(static_cast<int64_t>(from.x) - to.x) + up + 2 * lane;
}

// Region slots along the machine row. Calls nest, so slot lifetimes are
// strictly last-in first-out and a freed span is reusable by the next call
// at the same depth.
struct region_slot {
  int32_t x0 = 0;
  uint32_t width = 0;
};

class slot_stack {
public:
  region_slot allocate(uint32_t width) {
    region_slot s{cursor_, width};
    live_.push_back(s);
    cursor_ += static_cast<int32_t>(width) + 1; // one spacer column between regions
    if (cursor_ > high_water_) high_water_ = cursor_;
    return s;
  }

  void deallocate(const region_slot& s) {
    if (live_.empty() || live_.back().x0 != s.x0 || live_.back().width != s.width)
      throw std::logic_error("slot_stack: deallocation out of order");
    cursor_ = live_.back().x0;
    live_.pop_back();
  }

  int32_t cursor() const { return cursor_; }
  // rightmost column ever touched, plus the spacer after it
  int32_t high_water() const { return high_water_; }
  size_t depth() const { return live_.size(); }

private:
  int32_t cursor_ = 0;
  int32_t high_water_ = 0;
  std::vector<region_slot> live_;
};

} // namespace hqmap
