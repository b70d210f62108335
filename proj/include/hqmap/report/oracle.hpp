#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hqmap/code/syscode_io.hpp"

namespace hqmap {

// Independent replay of expanded system code. Knows nothing about how the
// mappers work: it walks the record list in file order, advances per-cell
// clocks and cycle counters by the opcode rules alone, and reports anything
// inconsistent. Used to audit every mapper output and to recompute the
// headline metrics from scratch.
struct replay_stats {
  uint64_t violation_count = 0;
  std::vector<std::string> violations; // first few, for diagnostics

  uint64_t exec_time = 0;    // latest record end
  uint64_t depth = 0;        // highest cycle reached anywhere
  uint64_t max_inflight = 0; // peak simultaneous bus transfers

  std::array<uint64_t, opcode_count> op_counts{};
  uint64_t moves_bus = 0;    // MOVE records with an endpoint on the strip
  uint64_t moves_region = 0;

  bool clean() const { return violation_count == 0; }
};

namespace detail {

struct cell_hash {
  size_t operator()(cell c) const {
    return std::hash<uint64_t>{}((static_cast<uint64_t>(static_cast<uint32_t>(c.x)) << 32) |
                                 static_cast<uint32_t>(c.y));
  }
};

inline uint64_t meta_u64(const syscode& code, std::string_view key, uint64_t fallback) {
  std::string_view v = code.meta_get(key);
  if (v.empty()) return fallback;
  uint64_t out = fallback;
  std::from_chars(v.data(), v.data() + v.size(), out);
  return out;
}

} // namespace detail

inline replay_stats replay_syscode(const syscode& code) {
  replay_stats rs;
  const int64_t bus_rows = static_cast<int64_t>(detail::meta_u64(code, "bus_bandwidth", 0));
  const uint64_t cycle_w = detail::meta_u64(code, "swap_cycle_weight", 1);

  struct clock {
    uint64_t time = 0;
    uint64_t level = 0;
  };
  std::unordered_map<cell, clock, detail::cell_hash> cells;

  auto flag = [&](size_t idx, std::string msg) {
    ++rs.violation_count;
    if (rs.violations.size() < 50)
      rs.violations.push_back("record " + std::to_string(idx) + ": " + std::move(msg));
  };

  auto on_bus = [&](cell c) { return c.y < bus_rows; };

  // transfer episodes: maximal MOVE chains that share a tag and continue
  // each other in both path and time
  struct episode {
    cell head;
    uint64_t head_time = 0;
    uint64_t begin = 0;
    bool bus = false;
    bool open = false;
  };
  std::unordered_map<uint32_t, episode> episodes;
  std::vector<std::pair<uint64_t, int>> events; // (+1 begin, -1 end)
  auto close_episode = [&](episode& ep) {
    if (ep.open && ep.bus) {
      events.emplace_back(ep.begin, +1);
      events.emplace_back(ep.head_time, -1);
    }
    ep.open = false;
  };

  for (size_t idx = 0; idx < code.records.size(); ++idx) {
    const record& r = code.records[idx];
    bool two = !r.one_cell();

    if (two && manhattan(r.a, r.b) != 1)
      flag(idx, "cells " + to_string(r.a) + " and " + to_string(r.b) + " are not adjacent");

    clock& ca = cells[r.a];
    if (r.start < ca.time)
      flag(idx, "starts at " + std::to_string(r.start) + " but cell " + to_string(r.a) +
                    " is busy until " + std::to_string(ca.time));
    if (two) {
      const clock& cb = cells[r.b];
      if (r.start < cb.time)
        flag(idx, "starts at " + std::to_string(r.start) + " but cell " + to_string(r.b) +
                      " is busy until " + std::to_string(cb.time));
    }

    uint64_t end = r.start + r.duration;
    rs.exec_time = std::max(rs.exec_time, end);
    ++rs.op_counts[static_cast<size_t>(r.op)];

    switch (r.op) {
      case opcode::init:
        if (two) flag(idx, "INIT takes one cell");
        ca.time = end;
        ca.level = 0;
        break;
      case opcode::sync: {
        if (two) {
          clock& cb = cells[r.b];
          uint64_t lv = std::max(ca.level, cb.level);
          ca = cb = {end, lv};
        } else {
          ca.time = end;
        }
        break;
      }
      case opcode::move: {
        if (!two) {
          flag(idx, "MOVE takes two cells");
          break;
        }
        clock& cb = cells[r.b];
        cb.level = ca.level + cycle_w;
        ca.time = cb.time = end;
        if (on_bus(r.a) || on_bus(r.b)) ++rs.moves_bus;
        else ++rs.moves_region;
        rs.depth = std::max(rs.depth, cb.level);

        episode& ep = episodes[r.tag];
        if (!ep.open || !(ep.head == r.a) || ep.head_time != r.start) {
          close_episode(ep);
          ep = {r.b, end, r.start, on_bus(r.a) || on_bus(r.b), true};
        } else {
          ep.head = r.b;
          ep.head_time = end;
          ep.bus = ep.bus || on_bus(r.b);
        }
        break;
      }
      default: { // gate opcodes
        uint64_t adv = r.op == opcode::swap ? cycle_w : 1;
        if (two) {
          clock& cb = cells[r.b];
          uint64_t lv = std::max(ca.level, cb.level) + adv;
          ca = cb = {end, lv};
          rs.depth = std::max(rs.depth, lv);
        } else {
          if (is_two_qubit(static_cast<gate_kind>(r.op)))
            flag(idx, std::string(opcode_name(r.op)) + " takes two cells");
          ca.time = end;
          ca.level += adv;
          rs.depth = std::max(rs.depth, ca.level);
        }
        break;
      }
    }
  }

  for (auto& [tag, ep] : episodes) close_episode(ep);

  // half-open intervals: an episode ending exactly when another begins does
  // not overlap it, so drain the -1 events first
  std::sort(events.begin(), events.end());
  uint64_t live = 0;
  for (const auto& [t, delta] : events) {
    if (delta > 0) ++live;
    else --live;
    rs.max_inflight = std::max(rs.max_inflight, live);
  }
  return rs;
}

} // namespace hqmap
