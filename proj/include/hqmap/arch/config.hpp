#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "hqmap/diagnostics.hpp"
#include "hqmap/qasm/ast.hpp"

namespace hqmap {

enum class placement_mode : uint8_t { fcfs, optimized };

// Machine and pass parameters. Durations are in abstract ticks; the defaults
// make two-qubit gates an order of magnitude slower than single-qubit ones
// and an in-place swap three moves' worth.
struct arch_config {
  uint32_t bus_bandwidth = 0; // lane count; 0 means derive from the program
  uint64_t swap_time = 30;
  uint64_t move_time = 10;
  uint64_t swap_cycle_weight = 1;
  std::array<uint64_t, gate_kind_count> gate_time{};
  placement_mode placement = placement_mode::fcfs;
  bool memoize = true;

  arch_config() {
    for (auto& t : gate_time) t = 1;
    gate_time[static_cast<size_t>(gate_kind::cnot)] = 10;
    gate_time[static_cast<size_t>(gate_kind::cz)] = 10;
    gate_time[static_cast<size_t>(gate_kind::swap)] = 30;
    gate_time[static_cast<size_t>(gate_kind::measz)] = 10;
    gate_time[static_cast<size_t>(gate_kind::prepz)] = 10;
  }

  uint64_t duration_of(gate_kind g) const {
    return gate_time[static_cast<size_t>(g)];
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline uint64_t parse_uint(std::string_view v, uint32_t line, const char* key) {
  uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw parse_error({line, 1}, std::string(key) + " expects a non-negative integer, got '" +
                                     std::string(v) + "'");
  return out;
}

} // namespace detail

// `key = value` lines, `#` comments. Unknown keys are hard errors so a typo
// cannot silently fall back to a default.
inline arch_config parse_arch_config(std::string_view text) {
  arch_config cfg;
  uint32_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw parse_error({line_no, 1}, "expected 'key = value'");
    std::string_view key = detail::trim(line.substr(0, eq));
    std::string_view val = detail::trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw parse_error({line_no, 1}, "expected 'key = value'");

    if (key == "bus_bandwidth") {
      if (val == "auto") {
        cfg.bus_bandwidth = 0;
      } else {
        uint64_t v = detail::parse_uint(val, line_no, "bus_bandwidth");
        if (v == 0 || v > 4096)
          throw parse_error({line_no, 1}, "bus_bandwidth must be in [1, 4096] or 'auto'");
        cfg.bus_bandwidth = static_cast<uint32_t>(v);
      }
    } else if (key == "swap_time") {
      cfg.swap_time = detail::parse_uint(val, line_no, "swap_time");
    } else if (key == "move_time") {
      cfg.move_time = detail::parse_uint(val, line_no, "move_time");
    } else if (key == "swap_cycle_weight") {
      cfg.swap_cycle_weight = detail::parse_uint(val, line_no, "swap_cycle_weight");
    } else if (key == "placement_mode") {
      if (val == "fcfs") cfg.placement = placement_mode::fcfs;
      else if (val == "optimized") cfg.placement = placement_mode::optimized;
      else throw parse_error({line_no, 1}, "placement_mode must be 'fcfs' or 'optimized'");
    } else if (key == "memoize") {
      if (val == "on") cfg.memoize = true;
      else if (val == "off") cfg.memoize = false;
      else throw parse_error({line_no, 1}, "memoize must be 'on' or 'off'");
    } else if (key.substr(0, 10) == "gate_time.") {
      auto g = lookup_gate(std::string(key.substr(10)));
      if (!g)
        throw parse_error({line_no, 1}, "unknown gate '" + std::string(key.substr(10)) + "'");
      cfg.gate_time[static_cast<size_t>(*g)] = detail::parse_uint(val, line_no, "gate_time");
    } else {
      throw parse_error({line_no, 1}, "unknown key '" + std::string(key) + "'");
    }
  }
  return cfg;
}

// Auto bandwidth: wide enough that any single call can stream all its
// arguments on distinct lanes, over every module main can actually reach.
inline uint32_t resolved_bus_bandwidth(const arch_config& cfg, const program& p) {
  if (cfg.bus_bandwidth != 0) return cfg.bus_bandwidth;
  uint32_t best = 1;
  std::vector<uint8_t> seen(p.modules.size(), 0);
  auto visit = [&](auto&& self, int32_t mi) -> void {
    if (mi < 0 || seen[mi]) return;
    seen[mi] = 1;
    best = std::max(best, static_cast<uint32_t>(p.modules[mi].param_count()));
    for (const auto& in : p.modules[mi].body)
      if (in.kind == instr_kind::call) self(self, in.callee_index);
  };
  if (p.main_index >= 0) visit(visit, p.main_index);
  return best;
}

} // namespace hqmap
