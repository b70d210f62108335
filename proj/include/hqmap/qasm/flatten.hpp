#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqmap/qasm/ast.hpp"

namespace hqmap {

struct instruction_counts {
  uint64_t modular = 0;   // body instructions of modules reachable from main
  uint64_t flattened = 0; // gates after expanding every call
  bool saturated = false; // flattened overflowed uint64_t
};

// Counts without materializing anything. Memoized per module, so this is
// linear in program size even when the expansion is astronomically large.
inline instruction_counts count_instructions(const program& p) {
  instruction_counts out;
  if (p.main_index < 0) return out;

  constexpr uint64_t kMax = std::numeric_limits<uint64_t>::max();
  auto sat_add = [&](uint64_t a, uint64_t b) {
    if (a > kMax - b) {
      out.saturated = true;
      return kMax;
    }
    return a + b;
  };

  std::vector<uint64_t> flat(p.modules.size(), kMax);
  std::vector<uint8_t> done(p.modules.size(), 0);

  auto expand = [&](auto&& self, int32_t mi) -> uint64_t {
    if (done[mi]) return flat[mi];
    done[mi] = 1; // validate() rejects cycles, so no grey state needed
    out.modular = sat_add(out.modular, p.modules[mi].body.size());
    uint64_t n = 0;
    for (const auto& in : p.modules[mi].body) {
      if (in.kind == instr_kind::call) {
        if (in.callee_index < 0) throw std::logic_error("flatten: unresolved callee");
        n = sat_add(n, self(self, in.callee_index));
      } else {
        n = sat_add(n, 1);
      }
    }
    flat[mi] = n;
    return n;
  };

  out.flattened = expand(expand, p.main_index);
  return out;
}

// Thrown when an expansion would exceed the caller's gate budget.
struct flatten_limit_error : std::runtime_error {
  uint64_t flattened;
  bool saturated;
  flatten_limit_error(uint64_t n, bool sat, uint64_t limit)
      : std::runtime_error("flattening would produce " +
                           (sat ? std::string("more than 2^64") : std::to_string(n)) +
                           " gates (limit " + std::to_string(limit) + ")"),
        flattened(n),
        saturated(sat) {}
};

inline constexpr uint64_t kDefaultFlattenLimit = 10'000'000;

// Expands every call in place, producing one global qubit register and a
// single gate list. Qubits born inside a call get a path-qualified name,
// e.g. "sub@3/t[1]" for local t[1] of the sub() called at instruction 3.
inline flat_program flatten(const program& p, uint64_t limit = kDefaultFlattenLimit) {
  instruction_counts c = count_instructions(p);
  if (c.saturated || c.flattened > limit)
    throw flatten_limit_error(c.flattened, c.saturated, limit);

  flat_program out;
  out.instrs.reserve(c.flattened);

  // maps callee slot -> global qubit id for the active frame
  auto expand = [&](auto&& self, int32_t mi, const std::vector<uint32_t>& env,
                    const std::string& path) -> void {
    const module_def& m = p.modules[mi];
    for (size_t ii = 0; ii < m.body.size(); ++ii) {
      const instr& in = m.body[ii];
      if (in.kind == instr_kind::call) {
        const module_def& callee = p.modules[in.callee_index];
        std::vector<uint32_t> sub(callee.qubit_count());
        for (size_t a = 0; a < in.qubits.size(); ++a)
          sub[a] = env[in.qubits[a].slot];
        std::string sub_path =
            path + callee.name + "@" + std::to_string(ii) + "/";
        for (uint32_t s = callee.param_count(); s < callee.qubit_count(); ++s) {
          sub[s] = static_cast<uint32_t>(out.qubits.size());
          out.qubits.push_back(sub_path + callee.qubit_display(s));
        }
        self(self, in.callee_index, sub, sub_path);
        continue;
      }
      flat_instr g;
      g.gate = in.gate;
      g.angle = in.angle;
      g.q0 = env[in.qubits[0].slot];
      g.q1 = in.kind == instr_kind::gate2 ? env[in.qubits[1].slot] : g.q0;
      g.src_module = mi;
      g.src_instr = static_cast<uint32_t>(ii);
      out.instrs.push_back(g);
    }
  };

  const module_def& main = p.main();
  std::vector<uint32_t> env(main.qubit_count());
  for (uint32_t s = 0; s < main.qubit_count(); ++s) {
    env[s] = s;
    out.qubits.push_back(main.qubit_display(s));
  }
  expand(expand, p.main_index, env, "");
  return out;
}

} // namespace hqmap
