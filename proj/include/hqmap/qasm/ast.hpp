#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hqmap/diagnostics.hpp"

namespace hqmap {

// Fixed gate vocabulary. MeasZ/PrepZ are scheduled like one-qubit gates.
enum class gate_kind : uint8_t {
  h, x, y, z, s, sdag, t, tdag, rz, // one-qubit
  cnot, cz, swap,                   // two-qubit
  measz, prepz,                     // one-qubit (measurement / reset)
};

inline constexpr int gate_kind_count = 14;

inline constexpr std::array<std::string_view, gate_kind_count> gate_names = {
    "H", "X", "Y", "Z", "S", "Sdag", "T", "Tdag", "Rz",
    "CNOT", "CZ", "SWAP", "MeasZ", "PrepZ"};

inline std::string_view gate_name(gate_kind g) {
  return gate_names[static_cast<size_t>(g)];
}

inline bool is_two_qubit(gate_kind g) {
  return g == gate_kind::cnot || g == gate_kind::cz || g == gate_kind::swap;
}

inline std::optional<gate_kind> lookup_gate(std::string_view name) {
  for (int i = 0; i < gate_kind_count; ++i)
    if (gate_names[i] == name) return static_cast<gate_kind>(i);
  return std::nullopt;
}

// A qubit reference as written in source: NAME or NAME[INT]. `slot` is the
// resolved index into the owning module's qubit enumeration (params first,
// then locals with arrays expanded element by element).
struct qubit_ref {
  std::string name;
  std::optional<uint32_t> index;
  int32_t slot = -1;
  source_loc loc;

  bool operator==(const qubit_ref& o) const {
    return name == o.name && index == o.index;
  }
};

inline std::string to_string(const qubit_ref& q) {
  if (q.index) return q.name + "[" + std::to_string(*q.index) + "]";
  return q.name;
}

enum class instr_kind : uint8_t { gate1, gate2, call };

struct instr {
  instr_kind kind = instr_kind::gate1;
  gate_kind gate = gate_kind::h; // gate1/gate2 only
  double angle = 0.0;            // Rz only; parsed but otherwise ignored
  std::vector<qubit_ref> qubits; // operands (gates) or arguments (calls)
  std::string callee;            // call only
  int32_t callee_index = -1;     // resolved module index, call only
  source_loc loc;

  bool operator==(const instr& o) const {
    return kind == o.kind && gate == o.gate && angle == o.angle &&
           qubits == o.qubits && callee == o.callee;
  }
};

// Local declaration, scalar (`qbit t;`) or sized array (`qbit t[4];`).
struct qubit_decl {
  std::string name;
  std::optional<uint32_t> size;
  source_loc loc;

  uint32_t element_count() const { return size ? *size : 1; }

  bool operator==(const qubit_decl& o) const {
    return name == o.name && size == o.size;
  }
};

struct module_def {
  std::string name;
  std::vector<std::string> params; // scalar parameter names, in order
  std::vector<qubit_decl> locals;
  std::vector<instr> body;
  source_loc loc;

  uint32_t param_count() const { return static_cast<uint32_t>(params.size()); }

  uint32_t local_count() const {
    uint32_t n = 0;
    for (const auto& d : locals) n += d.element_count();
    return n;
  }

  uint32_t qubit_count() const { return param_count() + local_count(); }

  // Display name for qubit slot i (params, then expanded locals).
  std::string qubit_display(uint32_t slot) const {
    if (slot < params.size()) return params[slot];
    uint32_t i = slot - param_count();
    for (const auto& d : locals) {
      if (i < d.element_count())
        return d.size ? d.name + "[" + std::to_string(i) + "]" : d.name;
      i -= d.element_count();
    }
    return "<bad-slot>";
  }

  bool operator==(const module_def& o) const {
    return name == o.name && params == o.params && locals == o.locals &&
           body == o.body;
  }
};

struct program {
  std::vector<module_def> modules;
  int32_t main_index = -1;

  const module_def* find_module(std::string_view name) const {
    for (const auto& m : modules)
      if (m.name == name) return &m;
    return nullptr;
  }

  int32_t module_index(std::string_view name) const {
    for (size_t i = 0; i < modules.size(); ++i)
      if (modules[i].name == name) return static_cast<int32_t>(i);
    return -1;
  }

  const module_def& main() const { return modules[static_cast<size_t>(main_index)]; }

  bool operator==(const program& o) const { return modules == o.modules; }
};

// One fully expanded instruction: no calls left, operands are indices into
// flat_program::qubits.
struct flat_instr {
  gate_kind gate = gate_kind::h;
  double angle = 0.0;
  uint32_t q0 = 0;
  uint32_t q1 = 0; // two-qubit gates only
  int32_t src_module = -1; // module the instruction came from
  int32_t src_instr = -1;  // body index within that module
};

struct flat_program {
  std::vector<std::string> qubits; // fully qualified names, creation order
  std::vector<flat_instr> instrs;
};

} // namespace hqmap
