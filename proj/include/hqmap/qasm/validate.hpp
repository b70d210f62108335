#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hqmap/qasm/ast.hpp"

namespace hqmap {

// Structural validation of the IR. The parser already enforces most of this
// for text inputs; validate() re-checks everything so that programs built in
// memory (benchmark generators, tests) get the same guarantees.
inline std::vector<diagnostic> validate(const program& p) {
  std::vector<diagnostic> out;
  auto err = [&](source_loc loc, std::string msg) {
    out.push_back({severity::error, loc, std::move(msg)});
  };

  if (p.main_index < 0 || p.main_index >= static_cast<int32_t>(p.modules.size())) {
    err({}, "program has no 'main' module");
  } else if (!p.main().params.empty()) {
    err(p.main().loc, "'main' must declare zero parameters");
  }

  std::unordered_map<std::string, int> seen_names;
  for (const auto& m : p.modules) {
    if (++seen_names[m.name] == 2)
      err(m.loc, "duplicate module name '" + m.name + "'");
    if (lookup_gate(m.name))
      err(m.loc, "module name '" + m.name + "' is a reserved gate name");
  }

  for (const auto& m : p.modules) {
    // rebuild the slot map and check every reference against it
    struct binding {
      uint32_t slot;
      std::optional<uint32_t> size;
    };
    std::unordered_map<std::string, binding> names;
    uint32_t slot = 0;
    for (const auto& pn : m.params) {
      if (!names.emplace(pn, binding{slot, std::nullopt}).second)
        err(m.loc, "module '" + m.name + "': duplicate qubit name '" + pn + "'");
      ++slot;
    }
    for (const auto& d : m.locals) {
      if (!names.emplace(d.name, binding{slot, d.size}).second)
        err(d.loc, "module '" + m.name + "': duplicate qubit name '" + d.name + "'");
      slot += d.element_count();
    }
    const uint32_t nq = slot;

    auto check_ref = [&](const qubit_ref& q, source_loc loc) {
      auto it = names.find(q.name);
      if (it == names.end()) {
        err(loc, "module '" + m.name + "': unknown qubit '" + q.name + "'");
        return;
      }
      const binding& b = it->second;
      int32_t want = -1;
      if (q.index) {
        if (!b.size || *q.index >= *b.size) {
          err(loc, "module '" + m.name + "': bad index on '" + to_string(q) + "'");
          return;
        }
        want = static_cast<int32_t>(b.slot + *q.index);
      } else {
        if (b.size) {
          err(loc, "module '" + m.name + "': array '" + q.name + "' used without index");
          return;
        }
        want = static_cast<int32_t>(b.slot);
      }
      if (q.slot != want)
        err(loc, "module '" + m.name + "': unresolved reference '" + to_string(q) + "'");
      if (q.slot < 0 || q.slot >= static_cast<int32_t>(nq))
        err(loc, "module '" + m.name + "': reference slot out of range");
    };

    for (const auto& in : m.body) {
      switch (in.kind) {
        case instr_kind::gate1:
          if (is_two_qubit(in.gate) || in.qubits.size() != 1)
            err(in.loc, "module '" + m.name + "': bad one-qubit instruction shape");
          break;
        case instr_kind::gate2:
          if (!is_two_qubit(in.gate) || in.qubits.size() != 2)
            err(in.loc, "module '" + m.name + "': bad two-qubit instruction shape");
          else if (in.qubits[0].slot == in.qubits[1].slot)
            err(in.loc, "module '" + m.name + "': " + std::string(gate_name(in.gate)) +
                            " operands must be distinct");
          break;
        case instr_kind::call: {
          if (in.qubits.empty()) {
            err(in.loc, "module '" + m.name + "': call passes no qubits");
            break;
          }
          const module_def* callee = p.find_module(in.callee);
          if (!callee) {
            err(in.loc, "module '" + m.name + "': unknown module or gate name '" +
                            in.callee + "'");
            break;
          }
          if (in.callee_index != p.module_index(in.callee))
            err(in.loc, "module '" + m.name + "': stale callee resolution for '" +
                            in.callee + "'");
          if (callee->param_count() != in.qubits.size())
            err(in.loc, "module '" + m.name + "': '" + in.callee + "' expects " +
                            std::to_string(callee->param_count()) + " arguments, got " +
                            std::to_string(in.qubits.size()));
          for (size_t i = 0; i < in.qubits.size(); ++i)
            for (size_t j = i + 1; j < in.qubits.size(); ++j)
              if (in.qubits[i].slot == in.qubits[j].slot)
                err(in.loc, "module '" + m.name + "': duplicate call argument '" +
                                to_string(in.qubits[j]) + "'");
          break;
        }
      }
      for (const auto& q : in.qubits) check_ref(q, in.loc);
    }
  }

  // recursion check: the call graph must be a DAG
  enum class mark : uint8_t { white, grey, black };
  std::vector<mark> marks(p.modules.size(), mark::white);
  std::vector<int32_t> stack;

  auto dfs = [&](auto&& self, int32_t mi) -> bool {
    marks[mi] = mark::grey;
    stack.push_back(mi);
    for (const auto& in : p.modules[mi].body) {
      if (in.kind != instr_kind::call || in.callee_index < 0) continue;
      int32_t ci = in.callee_index;
      if (marks[ci] == mark::grey) {
        std::string cyc;
        for (size_t k = 0; k < stack.size(); ++k) {
          if (!cyc.empty()) cyc += " -> ";
          cyc += p.modules[stack[k]].name;
        }
        cyc += " -> " + p.modules[ci].name;
        err(in.loc, "recursive module calls are not supported: " + cyc);
        return false;
      }
      if (marks[ci] == mark::white && !self(self, ci)) return false;
    }
    stack.pop_back();
    marks[mi] = mark::black;
    return true;
  };

  for (size_t i = 0; i < p.modules.size(); ++i)
    if (marks[i] == mark::white) {
      stack.clear();
      dfs(dfs, static_cast<int32_t>(i));
    }

  return out;
}

inline bool is_valid(const program& p) { return validate(p).empty(); }

} // namespace hqmap
