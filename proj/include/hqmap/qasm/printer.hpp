#pragma once

#include <charconv>
#include <cstdio>
#include <string>

#include "hqmap/qasm/ast.hpp"

namespace hqmap {

namespace detail {

// shortest float form that parses back to the same double
inline std::string canonical_float(double v) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::stod(buf) == v) break;
  }
  std::string s = buf;
  // keep the token a FLOAT, not an INT, so reprints lex identically
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

} // namespace detail

// Canonical re-print of a program. parse(to_qasm(p)) is structurally equal
// to p for any parseable p.
inline std::string to_qasm(const program& p) {
  std::string out;
  for (const auto& m : p.modules) {
    out += "module " + m.name + "(";
    for (size_t i = 0; i < m.params.size(); ++i) {
      if (i) out += ", ";
      out += "qbit " + m.params[i];
    }
    out += ") {\n";
    for (const auto& d : m.locals) {
      out += "  qbit " + d.name;
      if (d.size) out += "[" + std::to_string(*d.size) + "]";
      out += ";\n";
    }
    for (const auto& in : m.body) {
      out += "  ";
      if (in.kind == instr_kind::call) {
        out += in.callee + "(";
        for (size_t i = 0; i < in.qubits.size(); ++i) {
          if (i) out += ", ";
          out += to_string(in.qubits[i]);
        }
        out += ");\n";
      } else {
        out += std::string(gate_name(in.gate)) + "(";
        if (in.gate == gate_kind::rz)
          out += detail::canonical_float(in.angle) + ", ";
        out += to_string(in.qubits[0]);
        if (in.kind == instr_kind::gate2) out += ", " + to_string(in.qubits[1]);
        out += ");\n";
      }
    }
    out += "}\n";
  }
  return out;
}

} // namespace hqmap
