#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hqmap/arch/config.hpp"
#include "hqmap/arch/layout.hpp"
#include "hqmap/code/syscode_io.hpp"
#include "hqmap/map/scheduler.hpp"
#include "hqmap/qasm/ast.hpp"

namespace hqmap {

// Baseline: every qubit of the fully expanded program in one near-square
// register, first-come first-served row-major placement, swap-chain routing
// for every two-qubit gate. No bus, no region structure.
struct flat_map_result {
  syscode code;
  region_shape grid;
  uint64_t exec_time = 0;
  uint64_t depth = 0;
};

inline flat_map_result map_flat(const flat_program& fp, const arch_config& cfg,
                                const std::vector<std::string>& module_names) {
  flat_map_result out;
  uint32_t n = static_cast<uint32_t>(fp.qubits.size());
  out.grid = region_shape_for(0, n);

  cell_field field;
  std::vector<cell> pos(n);
  for (uint32_t i = 0; i < n; ++i) {
    pos[i] = region_cell(out.grid, 0, 0, i);
    field.at(pos[i]) = {static_cast<int32_t>(i), 0, 0};
  }

  gate_scheduler sched(field, cfg, 0, out.code.records, pos);
  std::string tag;
  for (const flat_instr& g : fp.instrs) {
    tag.assign("g:");
    tag += module_names[g.src_module];
    tag += '#';
    tag += std::to_string(g.src_instr);
    uint32_t gate_tag = out.code.tags.intern(tag);
    if (g.q0 == g.q1) {
      sched.schedule_1q(g.q0, g.gate, gate_tag);
    } else {
      tag[0] = 'r'; // routing hops for this gate
      sched.schedule_2q(g.q0, g.q1, g.gate, gate_tag, out.code.tags.intern(tag));
    }
  }

  for (const record& r : out.code.records)
    out.exec_time = std::max(out.exec_time, r.end());
  out.depth = sched.max_level();

  out.code.meta_set("mode", "flat");
  out.code.meta_set("bus_bandwidth", "0");
  out.code.meta_set("swap_time", std::to_string(cfg.swap_time));
  out.code.meta_set("move_time", std::to_string(cfg.move_time));
  out.code.meta_set("swap_cycle_weight", std::to_string(cfg.swap_cycle_weight));
  out.code.meta_set("qubits", std::to_string(n));
  out.code.meta_set("footprint",
                    std::to_string(out.grid.width) + " " + std::to_string(out.grid.height));
  return out;
}

inline flat_map_result map_flat(const flat_program& fp, const arch_config& cfg,
                                const program& p) {
  std::vector<std::string> names;
  names.reserve(p.modules.size());
  for (const auto& m : p.modules) names.push_back(m.name);
  return map_flat(fp, cfg, names);
}

} // namespace hqmap
