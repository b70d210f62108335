#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace hqmap {

// Grid coordinate. x grows rightward along the machine row, y grows upward:
// rows [0, bus_bandwidth) are the communication strip, rows above it hold
// the module regions.
struct cell {
  int32_t x = 0;
  int32_t y = 0;

  bool operator==(const cell&) const = default;
};

inline int64_t manhattan(cell a, cell b) {
  return std::abs(static_cast<int64_t>(a.x) - b.x) +
         std::abs(static_cast<int64_t>(a.y) - b.y);
}

inline bool adjacent(cell a, cell b) { return manhattan(a, b) == 1; }

inline std::string to_string(cell c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

} // namespace hqmap
