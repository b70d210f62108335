#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hqmap/arch/geometry.hpp"
#include "hqmap/qasm/ast.hpp"

namespace hqmap {

// Timed operation vocabulary. The first gate_kind_count values mirror
// gate_kind; the rest are pure data movement and bookkeeping:
//   MOVE  shifts a qubit into a vacant adjacent cell
//   INIT  births a fresh qubit in one cell, resetting its clock
//   SYNC  zero-duration clock join between neighbours (or a one-cell no-op)
enum class opcode : uint8_t {
  // keep in sync with gate_kind
  h, x, y, z, s, sdag, t, tdag, rz, cnot, cz, swap, measz, prepz,
  move, init, sync,
};

inline constexpr size_t opcode_count = gate_kind_count + 3;

inline constexpr opcode to_opcode(gate_kind g) {
  return static_cast<opcode>(static_cast<uint8_t>(g));
}

inline constexpr bool is_gate_op(opcode op) {
  return static_cast<size_t>(op) < gate_kind_count;
}

inline std::string_view opcode_name(opcode op) {
  if (is_gate_op(op)) return gate_name(static_cast<gate_kind>(op));
  switch (op) {
    case opcode::move: return "MOVE";
    case opcode::init: return "INIT";
    default: return "SYNC";
  }
}

inline std::optional<opcode> lookup_opcode(std::string_view name) {
  if (auto g = lookup_gate(std::string(name))) return to_opcode(*g);
  if (name == "MOVE") return opcode::move;
  if (name == "INIT") return opcode::init;
  if (name == "SYNC") return opcode::sync;
  return std::nullopt;
}

// One timed operation on one or two adjacent cells. One-cell records store
// the same cell twice; two-cell records always name distinct neighbours, so
// a == b is the arity test.
struct record {
  uint64_t start = 0;
  uint64_t duration = 0;
  opcode op = opcode::sync;
  cell a;
  cell b;
  uint32_t tag = 0;

  bool one_cell() const { return a == b; }
  uint64_t end() const { return start + duration; }
  bool operator==(const record&) const = default;
};

// Interned record annotations. Tags say where a record came from (gate,
// routing hop, argument transfer, barrier) without bloating every record
// with a string.
class tag_table {
public:
  uint32_t intern(std::string_view s) {
    auto it = ids_.find(s);
    if (it != ids_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(names_.size());
    names_.emplace_back(s);
    ids_.emplace(names_.back(), id);
    return id;
  }

  std::string_view name(uint32_t id) const { return names_[id]; }
  size_t size() const { return names_.size(); }

private:
  std::vector<std::string> names_;
  struct sv_hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, uint32_t, sv_hash, std::equal_to<>> ids_;
};

} // namespace hqmap
