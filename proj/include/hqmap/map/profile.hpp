#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hqmap/arch/config.hpp"
#include "hqmap/arch/layout.hpp"
#include "hqmap/code/record.hpp"
#include "hqmap/place/placement.hpp"

namespace hqmap {

// One argument moving between caller and callee, in one direction. The hop
// string pins each step of the walk: S swaps with an occupant, M moves into
// a vacancy (both at region speed), B is a bus-row move. Cells are caller
// frame coordinates; start is relative to the owning call's base clock, so
// one stored set serves every call site that repeats the same pattern.
struct transfer_line {
  uint32_t arg = 0;
  cell src;
  cell dst;
  uint32_t lane = 0;
  uint64_t start = 0;
  std::string codes;
};

// The full journey of a call's arguments, shared between call steps that
// replay the same transfer pattern at different times.
struct transfer_set {
  std::vector<transfer_line> fwd;
  std::vector<transfer_line> bwd; // stored in emission (return) order
};

// A call instruction inside a template: which module to paste, where, when,
// and how the arguments travel there and back.
struct call_step {
  int32_t callee = -1;
  int32_t dx = 0;        // callee slot origin, caller-relative
  uint64_t delta = 0;    // instantiation time, caller-relative
  uint64_t base = 0;     // clock the transfer set's starts are relative to
  uint32_t instr_index = 0;
  uint32_t tset = 0;     // index into the owning profile's transfer sets
};

// template entry: a literal record or an index into call_steps
using template_entry = std::variant<record, uint32_t>;

// Everything knowable about one module independent of its call sites. The
// record side is relative (frame origin x = 0, time 0 at entry); aggregates
// describe the fully expanded subtree without materializing it.
struct module_profile {
  int32_t module = -1;
  region_shape shape;
  uint32_t n_params = 0;
  uint32_t n_locals = 0;
  placement place;                     // qubit slot -> region cell index
  std::vector<cell> final_param_cells; // where each param sits at exit
  uint64_t internal_time = 0;          // entry-to-exit duration
  uint64_t internal_cycle = 0;         // cycles added between the barriers

  uint32_t extent_cols = 0; // columns used, nested slots included
  uint32_t extent_rows = 0; // region rows used above the strip

  std::array<uint64_t, opcode_count> op_counts{};      // expanded records
  std::array<uint64_t, gate_kind_count> gate_counts{}; // logical instructions
  uint64_t hops_route = 0;    // swap-chain hops inside regions
  uint64_t hops_transfer = 0; // argument passing hops
  uint64_t cnot_instrs = 0;   // logical two-qubit gates
  uint64_t peak_cells = 0;    // deepest simultaneous region allocation
  uint64_t expanded_records = 0;

  std::vector<template_entry> templ;
  std::vector<call_step> calls;
  std::vector<transfer_set> tsets;
};

// A mapped program: per-module profiles plus the resolved machine.
struct mapping_result {
  arch_config cfg;
  uint32_t bus_rows = 1;
  int32_t main_index = -1;
  std::vector<std::string> module_names;
  std::vector<std::optional<module_profile>> profiles;
  tag_table tags;
  uint32_t machine_cols = 0;
  uint32_t machine_rows = 0;

  const module_profile& main_profile() const { return *profiles[main_index]; }
};

// Walk from src to dst through bus lane `lane`: straight down the source
// column, along the lane row, straight up the target column. Returns every
// cell on the walk, endpoints included.
inline std::vector<cell> transfer_path(cell src, cell dst, int32_t bus_rows,
                                       uint32_t lane) {
  int32_t lane_row = bus_rows - 1 - static_cast<int32_t>(lane);
  std::vector<cell> path;
  path.reserve(static_cast<size_t>(src.y - lane_row) + (dst.y - lane_row) +
               std::abs(src.x - dst.x) + 1);
  for (int32_t y = src.y; y > lane_row; --y) path.push_back({src.x, y});
  int32_t step = dst.x > src.x ? 1 : -1;
  for (int32_t x = src.x; x != dst.x; x += step) path.push_back({x, lane_row});
  for (int32_t y = lane_row; y < dst.y; ++y) path.push_back({dst.x, y});
  path.push_back(dst);
  return path;
}

// Boustrophedon walk over a region: every consecutive pair is adjacent, so
// a chain of SYNCs along it (and back) joins all clocks in the region.
inline std::vector<cell> snake_path(region_shape s, int32_t x0, int32_t y0) {
  std::vector<cell> path;
  path.reserve(s.cells());
  for (uint32_t r = 0; r < s.height; ++r)
    for (uint32_t c = 0; c < s.width; ++c) {
      uint32_t x = r % 2 == 0 ? c : s.width - 1 - c;
      path.push_back({x0 + static_cast<int32_t>(x), y0 + static_cast<int32_t>(r)});
    }
  return path;
}

inline uint64_t hop_duration(char code, const arch_config& cfg) {
  return code == 'B' ? cfg.move_time : cfg.swap_time;
}

inline opcode hop_opcode(char code) {
  return code == 'S' ? opcode::swap : opcode::move;
}

inline uint64_t transfer_duration(const transfer_line& tl, const arch_config& cfg) {
  uint64_t d = 0;
  for (char c : tl.codes) d += hop_duration(c, cfg);
  return d;
}

} // namespace hqmap
