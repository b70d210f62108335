#pragma once

// resource and comparison reports. every claim a report makes about a
// mapping can be re-derived from the emitted system code; audit_report
// does exactly that and lists the disagreements.
//
// structured file format (#hqmap-report v1): one key per line, fixed
// order, then optional per-module lines, closed by "end".
//
//   #hqmap-report v1
//   benchmark adder-8
//   mode hier
//   qubits_compute 25
//   qubits_bus 33
//   swaps_total 120
//   swaps_bus 80
//   swaps_intra 40
//   swaps_critical 17
//   cnots 56
//   swaps_per_cnot 0.714285
//   depth 123
//   time 4560
//   wallclock_ms 1.25
//   footprint 33 6
//   records 2345
//   gates h 5 cnot 56 t 7
//   permod main 1 4560 123 40
//   end
//
// doubles use the shortest representation that parses back to the same
// value, so a write/read/write cycle is byte-identical.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hqmap/code/syscode_io.hpp"
#include "hqmap/map/flat_mapper.hpp"
#include "hqmap/map/hier_mapper.hpp"
#include "hqmap/report/oracle.hpp"

namespace hqmap {

struct report_error : std::runtime_error {
  explicit report_error(const std::string& what) : std::runtime_error(what) {}
};

struct module_usage {
  std::string name;
  uint64_t calls = 0; // dynamic instantiation count
  uint64_t time = 0;  // entry-to-exit duration of one instance
  uint64_t cycle = 0; // cycles one instance adds
  uint64_t swaps = 0; // hops in the module's own template
  bool operator==(const module_usage&) const = default;
};

struct resource_report {
  std::string benchmark;
  std::string mode; // "hier" or "flat"

  uint64_t qubits_compute = 0;
  uint64_t qubits_bus = 0;
  uint64_t swaps_total = 0;
  uint64_t swaps_bus = 0;      // argument-passing hops across the strip
  uint64_t swaps_intra = 0;    // routing hops inside regions
  uint64_t swaps_critical = 0; // routing/passing hops on the critical path
  uint64_t cnots = 0;          // logical two-qubit gates
  double swaps_per_cnot = 0.0; // swaps_intra over cnots
  uint64_t depth = 0;
  uint64_t time = 0;
  double wallclock_ms = 0.0; // mapper wall clock, expansion excluded

  uint32_t footprint_cols = 0;
  uint32_t footprint_rows = 0;
  uint64_t records = 0;

  std::array<uint64_t, gate_kind_count> gate_counts{}; // logical instructions
  std::vector<module_usage> per_module;                // hier only

  bool operator==(const resource_report&) const = default;
};

struct comparison_report {
  double qubit_ratio = 0.0;         // hier total qubits over flat
  double swap_ratio = 0.0;          // hier swaps over flat
  double depth_ratio = 0.0;         // hier depth over flat
  double time_ratio = 0.0;          // hier execution time over flat
  double wallclock_speedup = 0.0;   // flat mapper time over hier mapper time
  double swap_depth_fraction = 0.0; // critical-path share of the hier swaps
};

namespace detail {

// walks the dependency chain that realises the final completion time and
// counts the movement records on it. records are per-cell time-ordered in
// file order, so a single forward sweep finds each record's gating
// predecessor: the latest-ending earlier record sharing a cell.
inline uint64_t critical_path_swaps(const syscode& code) {
  const auto& rs = code.records;
  if (rs.empty()) return 0;
  std::map<std::pair<int32_t, int32_t>, uint32_t> last;
  std::vector<int32_t> pred(rs.size(), -1);
  for (uint32_t i = 0; i < rs.size(); ++i) {
    const record& r = rs[i];
    auto touch = [&](cell c) {
      auto key = std::pair{c.x, c.y};
      auto it = last.find(key);
      if (it != last.end()) {
        auto j = static_cast<int32_t>(it->second);
        if (pred[i] < 0 || rs[j].end() > rs[pred[i]].end()) pred[i] = j;
      }
      last[key] = i;
    };
    touch(r.a);
    if (!r.one_cell()) touch(r.b);
  }

  uint32_t tail = 0;
  for (uint32_t i = 1; i < rs.size(); ++i)
    if (rs[i].end() > rs[tail].end()) tail = i;

  uint64_t hops = 0;
  for (int32_t i = static_cast<int32_t>(tail); i >= 0; i = pred[i]) {
    const record& r = rs[i];
    if (r.op != opcode::move && r.op != opcode::swap) continue;
    std::string_view nm = code.tags.name(r.tag);
    bool gate = nm.size() > 1 && nm[0] == 'g' && nm[1] == ':';
    if (!gate) ++hops;
  }
  return hops;
}

// how many times each module is instantiated in the full expansion.
// callers are processed before callees, so the counts accumulate along
// every call chain; the call graph is acyclic by validation.
inline std::vector<uint64_t> dynamic_call_counts(const mapping_result& mr) {
  size_t n = mr.profiles.size();
  std::vector<uint64_t> dyn(n, 0);
  std::vector<int32_t> order;
  std::vector<char> seen(n, 0);
  auto dfs = [&](auto&& self, int32_t m) -> void {
    seen[static_cast<size_t>(m)] = 1;
    for (const call_step& cs : mr.profiles[static_cast<size_t>(m)]->calls)
      if (!seen[static_cast<size_t>(cs.callee)]) self(self, cs.callee);
    order.push_back(m);
  };
  dfs(dfs, mr.main_index);

  dyn[static_cast<size_t>(mr.main_index)] = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    for (const call_step& cs : mr.profiles[static_cast<size_t>(*it)]->calls)
      dyn[static_cast<size_t>(cs.callee)] =
          sat_add(dyn[static_cast<size_t>(cs.callee)], dyn[static_cast<size_t>(*it)]);
  return dyn;
}

inline void append_double(std::string& out, double v) {
  if (!std::isfinite(v)) throw report_error("non-finite value in report");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

inline double parse_double(std::string_view sv, uint32_t line_no,
                           const char* what) {
  double v = 0.0;
  auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size())
    throw parse_error({line_no, 1}, std::string("bad ") + what);
  return v;
}

} // namespace detail

inline resource_report build_report(const mapping_result& mr,
                                    const syscode& code, std::string benchmark,
                                    double wallclock_ms) {
  const module_profile& main = mr.main_profile();
  resource_report rep;
  rep.benchmark = std::move(benchmark);
  rep.mode = "hier";
  rep.qubits_compute = main.peak_cells;
  rep.qubits_bus = uint64_t{mr.bus_rows} * mr.machine_cols;
  rep.swaps_bus = main.hops_transfer;
  rep.swaps_intra = main.hops_route;
  rep.swaps_total = rep.swaps_bus + rep.swaps_intra;
  rep.swaps_critical = detail::critical_path_swaps(code);
  rep.cnots = main.cnot_instrs;
  rep.swaps_per_cnot =
      rep.cnots ? static_cast<double>(rep.swaps_intra) / static_cast<double>(rep.cnots) : 0.0;
  rep.depth = main.internal_cycle;
  rep.time = main.internal_time;
  rep.wallclock_ms = wallclock_ms;
  rep.footprint_cols = mr.machine_cols;
  rep.footprint_rows = mr.machine_rows;
  rep.records = main.expanded_records;
  rep.gate_counts = main.gate_counts;

  std::vector<uint64_t> dyn = detail::dynamic_call_counts(mr);
  for (size_t m = 0; m < mr.profiles.size(); ++m) {
    if (!mr.profiles[m]) continue;
    const module_profile& pr = *mr.profiles[m];
    module_usage u;
    u.name = mr.module_names[m];
    u.calls = dyn[m];
    u.time = pr.internal_time;
    u.cycle = pr.internal_cycle;
    for (const template_entry& te : pr.templ)
      if (const record* r = std::get_if<record>(&te)) {
        std::string_view nm = mr.tags.name(r->tag);
        if (nm.size() > 1 && nm[0] == 'r' && nm[1] == ':') ++u.swaps;
      }
    for (const call_step& cs : pr.calls) {
      const transfer_set& ts = pr.tsets[cs.tset];
      for (const transfer_line& t : ts.fwd) u.swaps += t.codes.size();
      for (const transfer_line& t : ts.bwd) u.swaps += t.codes.size();
    }
    rep.per_module.push_back(std::move(u));
  }
  return rep;
}

inline resource_report build_report(const flat_map_result& fr,
                                    std::string benchmark,
                                    double wallclock_ms) {
  resource_report rep;
  rep.benchmark = std::move(benchmark);
  rep.mode = "flat";
  rep.qubits_compute = fr.grid.cells();
  rep.qubits_bus = 0;
  for (const record& r : fr.code.records) {
    std::string_view nm = fr.code.tags.name(r.tag);
    if (nm.size() < 2 || nm[1] != ':') continue;
    if (nm[0] == 'r') {
      ++rep.swaps_intra;
    } else if (nm[0] == 'g') {
      ++rep.gate_counts[static_cast<size_t>(r.op)];
      if (!r.one_cell()) ++rep.cnots;
    }
  }
  rep.swaps_total = rep.swaps_intra;
  rep.swaps_critical = detail::critical_path_swaps(fr.code);
  rep.swaps_per_cnot =
      rep.cnots ? static_cast<double>(rep.swaps_intra) / static_cast<double>(rep.cnots) : 0.0;
  rep.depth = fr.depth;
  rep.time = fr.exec_time;
  rep.wallclock_ms = wallclock_ms;
  rep.footprint_cols = fr.grid.width;
  rep.footprint_rows = fr.grid.height;
  rep.records = fr.code.records.size();
  return rep;
}

inline comparison_report compare_reports(const resource_report& h,
                                         const resource_report& f) {
  if (h.gate_counts != f.gate_counts)
    throw report_error("reports describe different programs: logical gate "
                       "counts differ");
  auto ratio = [](double num, double den) { return den == 0.0 ? 0.0 : num / den; };
  comparison_report c;
  c.qubit_ratio = ratio(static_cast<double>(h.qubits_compute + h.qubits_bus),
                        static_cast<double>(f.qubits_compute + f.qubits_bus));
  c.swap_ratio = ratio(static_cast<double>(h.swaps_total),
                       static_cast<double>(f.swaps_total));
  c.depth_ratio =
      ratio(static_cast<double>(h.depth), static_cast<double>(f.depth));
  c.time_ratio =
      ratio(static_cast<double>(h.time), static_cast<double>(f.time));
  c.wallclock_speedup = ratio(f.wallclock_ms, h.wallclock_ms);
  c.swap_depth_fraction = ratio(static_cast<double>(h.swaps_critical),
                                static_cast<double>(h.swaps_total));
  return c;
}

// recomputes every derivable field straight from the system code and
// returns one line per disagreement; empty means the report is honest.
inline std::vector<std::string> audit_report(const resource_report& rep,
                                             const syscode& code) {
  std::vector<std::string> issues;
  auto expect = [&](const char* field, uint64_t claimed, uint64_t derived) {
    if (claimed != derived)
      issues.push_back(std::string(field) + ": report says " +
                       std::to_string(claimed) + ", system code gives " +
                       std::to_string(derived));
  };

  if (code.meta_get("mode") != rep.mode)
    issues.push_back("mode: report says " + rep.mode + ", system code says " +
                     std::string(code.meta_get("mode")));

  replay_stats st = replay_syscode(code);
  if (!st.clean()) {
    issues.push_back("system code has " + std::to_string(st.violation_count) +
                     " structural violations");
    for (const std::string& v : st.violations) issues.push_back("  " + v);
  }
  expect("depth", rep.depth, st.depth);
  expect("time", rep.time, st.exec_time);
  expect("records", rep.records, code.records.size());

  uint64_t bus = 0, intra = 0, cnots = 0;
  std::array<uint64_t, gate_kind_count> gates{};
  for (const record& r : code.records) {
    std::string_view nm = code.tags.name(r.tag);
    if (nm.size() < 2) continue;
    if (nm[0] == 'g' && nm[1] == ':') {
      ++gates[static_cast<size_t>(r.op)];
      if (!r.one_cell()) ++cnots;
    } else if (nm[0] == 'r' && nm[1] == ':') {
      ++intra;
    } else if (nm[0] == 'p' && (nm[1] == 'f' || nm[1] == 'b')) {
      ++bus;
    }
  }
  expect("swaps_intra", rep.swaps_intra, intra);
  expect("swaps_bus", rep.swaps_bus, bus);
  expect("swaps_total", rep.swaps_total, bus + intra);
  expect("cnots", rep.cnots, cnots);
  for (size_t k = 0; k < gate_kind_count; ++k)
    if (gates[k] != rep.gate_counts[k])
      issues.push_back("gate " + std::string(gate_names[k]) +
                       ": report says " + std::to_string(rep.gate_counts[k]) +
                       ", system code gives " + std::to_string(gates[k]));
  double spc = cnots ? static_cast<double>(intra) / static_cast<double>(cnots) : 0.0;
  if (spc != rep.swaps_per_cnot)
    issues.push_back("swaps_per_cnot disagrees with the recounted ratio");
  expect("swaps_critical", rep.swaps_critical,
         detail::critical_path_swaps(code));

  uint64_t cols = 0, rows = 0;
  {
    std::istringstream iss(std::string(code.meta_get("footprint")));
    if (!(iss >> cols >> rows))
      issues.push_back("footprint meta line missing or malformed");
  }
  expect("footprint cols", rep.footprint_cols, cols);
  expect("footprint rows", rep.footprint_rows, rows);
  for (const record& r : code.records) {
    for (cell c : {r.a, r.b})
      if (c.x < 0 || c.y < 0 || static_cast<uint64_t>(c.x) >= cols ||
          static_cast<uint64_t>(c.y) >= rows) {
        issues.push_back("record touches (" + std::to_string(c.x) + "," +
                         std::to_string(c.y) + ") outside the footprint");
        goto bounds_done;
      }
  }
bounds_done:
  if (rep.mode == "flat") {
    expect("qubits_compute", rep.qubits_compute, cols * rows);
    expect("qubits_bus", rep.qubits_bus, 0);
  } else {
    std::istringstream qi(std::string(code.meta_get("qubits")));
    uint64_t q = 0;
    if (!(qi >> q)) issues.push_back("qubits meta line missing or malformed");
    expect("qubits_compute", rep.qubits_compute, q);
    std::istringstream bi(std::string(code.meta_get("bus_bandwidth")));
    uint64_t b = 0;
    if (!(bi >> b))
      issues.push_back("bus_bandwidth meta line missing or malformed");
    expect("qubits_bus", rep.qubits_bus, b * cols);
  }
  return issues;
}

inline std::string write_report(const resource_report& rep) {
  if (rep.mode != "hier" && rep.mode != "flat")
    throw report_error("mode must be 'hier' or 'flat'");
  if (rep.benchmark.find('\n') != std::string::npos)
    throw report_error("benchmark name must be a single line");

  std::string out = "#hqmap-report v1\n";
  auto kv = [&](const char* key, uint64_t v) {
    out += key;
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  };
  auto kd = [&](const char* key, double v) {
    out += key;
    out += ' ';
    detail::append_double(out, v);
    out += '\n';
  };
  out += "benchmark " + rep.benchmark + "\n";
  out += "mode " + rep.mode + "\n";
  kv("qubits_compute", rep.qubits_compute);
  kv("qubits_bus", rep.qubits_bus);
  kv("swaps_total", rep.swaps_total);
  kv("swaps_bus", rep.swaps_bus);
  kv("swaps_intra", rep.swaps_intra);
  kv("swaps_critical", rep.swaps_critical);
  kv("cnots", rep.cnots);
  kd("swaps_per_cnot", rep.swaps_per_cnot);
  kv("depth", rep.depth);
  kv("time", rep.time);
  kd("wallclock_ms", rep.wallclock_ms);
  out += "footprint " + std::to_string(rep.footprint_cols) + " " +
         std::to_string(rep.footprint_rows) + "\n";
  kv("records", rep.records);
  out += "gates";
  for (size_t k = 0; k < gate_kind_count; ++k)
    if (rep.gate_counts[k]) {
      out += ' ';
      out += gate_names[k];
      out += ' ';
      out += std::to_string(rep.gate_counts[k]);
    }
  out += '\n';
  for (const module_usage& u : rep.per_module) {
    if (u.name.empty() ||
        u.name.find_first_of(" \t\n") != std::string::npos)
      throw report_error("module name unfit for serialization: '" + u.name +
                         "'");
    out += "permod " + u.name + " " + std::to_string(u.calls) + " " +
           std::to_string(u.time) + " " + std::to_string(u.cycle) + " " +
           std::to_string(u.swaps) + "\n";
  }
  out += "end\n";
  return out;
}

inline resource_report read_report(std::string_view text) {
  resource_report rep;
  uint32_t line_no = 0;
  size_t pos = 0;
  auto next_line = [&]() -> std::string_view {
    if (pos >= text.size())
      throw parse_error({line_no, 1}, "unexpected end of report");
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    return line;
  };

  if (next_line() != "#hqmap-report v1")
    throw parse_error({1, 1}, "missing '#hqmap-report v1' header");

  auto take = [&](const char* key) -> std::string_view {
    std::string_view line = next_line();
    std::string_view k(key);
    if (line.substr(0, k.size()) != k || line.size() == k.size() ||
        line[k.size()] != ' ')
      throw parse_error({line_no, 1},
                        "expected '" + std::string(key) + " <value>'");
    return line.substr(k.size() + 1);
  };
  auto take_u64 = [&](const char* key) {
    return detail::parse_num<uint64_t>(take(key), line_no, key);
  };
  auto take_dbl = [&](const char* key) {
    return detail::parse_double(take(key), line_no, key);
  };

  rep.benchmark = std::string(take("benchmark"));
  rep.mode = std::string(take("mode"));
  if (rep.mode != "hier" && rep.mode != "flat")
    throw parse_error({line_no, 1}, "mode must be 'hier' or 'flat'");
  rep.qubits_compute = take_u64("qubits_compute");
  rep.qubits_bus = take_u64("qubits_bus");
  rep.swaps_total = take_u64("swaps_total");
  rep.swaps_bus = take_u64("swaps_bus");
  rep.swaps_intra = take_u64("swaps_intra");
  rep.swaps_critical = take_u64("swaps_critical");
  rep.cnots = take_u64("cnots");
  rep.swaps_per_cnot = take_dbl("swaps_per_cnot");
  rep.depth = take_u64("depth");
  rep.time = take_u64("time");
  rep.wallclock_ms = take_dbl("wallclock_ms");
  {
    std::vector<std::string_view> f = detail::split_fields(take("footprint"));
    if (f.size() != 2)
      throw parse_error({line_no, 1}, "footprint needs two numbers");
    rep.footprint_cols = detail::parse_num<uint32_t>(f[0], line_no, "cols");
    rep.footprint_rows = detail::parse_num<uint32_t>(f[1], line_no, "rows");
  }
  rep.records = take_u64("records");

  {
    std::string_view line = next_line();
    if (line != "gates" && line.substr(0, 6) != "gates ")
      throw parse_error({line_no, 1}, "expected 'gates' line");
    std::vector<std::string_view> f = detail::split_fields(line);
    if (f.size() % 2 == 0)
      throw parse_error({line_no, 1}, "gates line needs name/count pairs");
    for (size_t i = 1; i + 1 < f.size(); i += 2) {
      size_t k = 0;
      while (k < gate_kind_count && gate_names[k] != f[i]) ++k;
      if (k == gate_kind_count)
        throw parse_error({line_no, 1},
                          "unknown gate '" + std::string(f[i]) + "'");
      if (rep.gate_counts[k])
        throw parse_error({line_no, 1},
                          "gate '" + std::string(f[i]) + "' listed twice");
      rep.gate_counts[k] =
          detail::parse_num<uint64_t>(f[i + 1], line_no, "gate count");
      if (rep.gate_counts[k] == 0)
        throw parse_error({line_no, 1}, "gate counts must be positive");
    }
  }

  for (;;) {
    std::string_view line = next_line();
    if (line == "end") break;
    std::vector<std::string_view> f = detail::split_fields(line);
    if (f.size() != 6 || f[0] != "permod")
      throw parse_error({line_no, 1}, "expected 'permod <name> <calls> "
                                      "<time> <cycle> <swaps>' or 'end'");
    module_usage u;
    u.name = std::string(f[1]);
    u.calls = detail::parse_num<uint64_t>(f[2], line_no, "calls");
    u.time = detail::parse_num<uint64_t>(f[3], line_no, "time");
    u.cycle = detail::parse_num<uint64_t>(f[4], line_no, "cycle");
    u.swaps = detail::parse_num<uint64_t>(f[5], line_no, "swaps");
    rep.per_module.push_back(std::move(u));
  }
  while (pos < text.size()) {
    std::string_view line = next_line();
    if (!line.empty())
      throw parse_error({line_no, 1}, "unexpected content after 'end'");
  }
  return rep;
}

inline constexpr std::string_view csv_header =
    "benchmark,mode,qubits_compute,qubits_bus,swaps_total,swaps_bus,"
    "swaps_intra,cnots,swaps_per_cnot,depth,time,wallclock_ms";

inline std::string write_csv(const std::vector<resource_report>& rows) {
  std::string out(csv_header);
  out += '\n';
  for (const resource_report& r : rows) {
    if (r.benchmark.find_first_of(",\"\n") != std::string::npos)
      throw report_error("benchmark name unfit for csv: '" + r.benchmark +
                         "'");
    out += r.benchmark;
    out += ',';
    out += r.mode;
    out += ',';
    out += std::to_string(r.qubits_compute) + ',';
    out += std::to_string(r.qubits_bus) + ',';
    out += std::to_string(r.swaps_total) + ',';
    out += std::to_string(r.swaps_bus) + ',';
    out += std::to_string(r.swaps_intra) + ',';
    out += std::to_string(r.cnots) + ',';
    detail::append_double(out, r.swaps_per_cnot);
    out += ',';
    out += std::to_string(r.depth) + ',';
    out += std::to_string(r.time) + ',';
    detail::append_double(out, r.wallclock_ms);
    out += '\n';
  }
  return out;
}

// reads back exactly the columns write_csv emits; everything the csv does
// not carry (gates, modules, footprint) is left defaulted.
inline std::vector<resource_report> read_csv(std::string_view text) {
  std::vector<resource_report> rows;
  uint32_t line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != csv_header)
        throw parse_error({1, 1}, "missing csv header");
      continue;
    }
    if (line.empty()) continue;

    std::vector<std::string_view> f;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i)
      if (i == line.size() || line[i] == ',') {
        f.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    if (f.size() != 12)
      throw parse_error({line_no, 1}, "csv row needs 12 fields");

    resource_report r;
    r.benchmark = std::string(f[0]);
    r.mode = std::string(f[1]);
    if (r.mode != "hier" && r.mode != "flat")
      throw parse_error({line_no, 1}, "mode must be 'hier' or 'flat'");
    r.qubits_compute = detail::parse_num<uint64_t>(f[2], line_no, "qubits");
    r.qubits_bus = detail::parse_num<uint64_t>(f[3], line_no, "qubits");
    r.swaps_total = detail::parse_num<uint64_t>(f[4], line_no, "swaps");
    r.swaps_bus = detail::parse_num<uint64_t>(f[5], line_no, "swaps");
    r.swaps_intra = detail::parse_num<uint64_t>(f[6], line_no, "swaps");
    r.cnots = detail::parse_num<uint64_t>(f[7], line_no, "cnots");
    r.swaps_per_cnot = detail::parse_double(f[8], line_no, "ratio");
    r.depth = detail::parse_num<uint64_t>(f[9], line_no, "depth");
    r.time = detail::parse_num<uint64_t>(f[10], line_no, "time");
    r.wallclock_ms = detail::parse_double(f[11], line_no, "wallclock");
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::string render_report_text(const resource_report& rep) {
  char buf[160];
  std::string out;
  out += rep.benchmark + " (" + rep.mode + " mapping)\n";
  auto row = [&](const char* label, const std::string& value) {
    std::snprintf(buf, sizeof buf, "  %-22s %s\n", label, value.c_str());
    out += buf;
  };
  row("computing qubits", std::to_string(rep.qubits_compute));
  row("bus qubits", std::to_string(rep.qubits_bus));
  row("footprint", std::to_string(rep.footprint_cols) + " x " +
                       std::to_string(rep.footprint_rows));
  row("swaps total", std::to_string(rep.swaps_total));
  row("  passing (bus)", std::to_string(rep.swaps_bus));
  row("  routing (intra)", std::to_string(rep.swaps_intra));
  row("  on critical path", std::to_string(rep.swaps_critical));
  row("cnots", std::to_string(rep.cnots));
  std::snprintf(buf, sizeof buf, "%.4f", rep.swaps_per_cnot);
  row("swaps per cnot", buf);
  row("depth (cycles)", std::to_string(rep.depth));
  row("execution time", std::to_string(rep.time));
  std::snprintf(buf, sizeof buf, "%.3f", rep.wallclock_ms);
  row("mapper wallclock ms", buf);
  row("records", std::to_string(rep.records));

  std::string gates;
  for (size_t k = 0; k < gate_kind_count; ++k)
    if (rep.gate_counts[k]) {
      if (!gates.empty()) gates += ' ';
      gates += std::string(gate_names[k]) + "=" +
               std::to_string(rep.gate_counts[k]);
    }
  row("gates", gates.empty() ? "none" : gates);

  if (!rep.per_module.empty()) {
    out += "  per module:\n";
    std::snprintf(buf, sizeof buf, "    %-16s %10s %12s %10s %10s\n", "name",
                  "calls", "time", "cycles", "swaps");
    out += buf;
    for (const module_usage& u : rep.per_module) {
      std::snprintf(buf, sizeof buf, "    %-16s %10llu %12llu %10llu %10llu\n",
                    u.name.c_str(), static_cast<unsigned long long>(u.calls),
                    static_cast<unsigned long long>(u.time),
                    static_cast<unsigned long long>(u.cycle),
                    static_cast<unsigned long long>(u.swaps));
      out += buf;
    }
  }
  return out;
}

inline std::string render_comparison_text(const comparison_report& c,
                                          const resource_report& h,
                                          const resource_report& f) {
  char buf[160];
  std::string out = "hierarchical vs flat: " + h.benchmark + "\n";
  auto row = [&](const char* label, uint64_t hv, uint64_t fv, double ratio) {
    std::snprintf(buf, sizeof buf, "  %-18s %14llu %14llu %10.3f\n", label,
                  static_cast<unsigned long long>(hv),
                  static_cast<unsigned long long>(fv), ratio);
    out += buf;
  };
  std::snprintf(buf, sizeof buf, "  %-18s %14s %14s %10s\n", "metric", "hier",
                "flat", "ratio");
  out += buf;
  row("qubits", h.qubits_compute + h.qubits_bus,
      f.qubits_compute + f.qubits_bus, c.qubit_ratio);
  row("swaps", h.swaps_total, f.swaps_total, c.swap_ratio);
  row("depth", h.depth, f.depth, c.depth_ratio);
  row("time", h.time, f.time, c.time_ratio);
  std::snprintf(buf, sizeof buf, "  %-18s %14.3f %14.3f %10.3f\n",
                "wallclock ms", h.wallclock_ms, f.wallclock_ms,
                c.wallclock_speedup);
  out += buf;
  std::snprintf(buf, sizeof buf, "  swaps on the hier critical path: %.3f\n",
                c.swap_depth_fraction);
  out += buf;
  return out;
}

} // namespace hqmap
