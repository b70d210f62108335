#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hqmap/code/syscode_io.hpp"
#include "hqmap/diagnostics.hpp"
#include "hqmap/map/hier_mapper.hpp"
#include "hqmap/map/profile.hpp"

namespace hqmap {

// Compact mapped form: one section per module holding its template, written
// as '#hqmap-hcode v1'. All coordinates are frame coordinates (the module's
// own region starts at x 0 above the bus strip). Section lines:
//   module <name> <W> <H> <params> <locals> <T> <IC> <ext_cols> <ext_rows>
//   p <x> <y>                 entry cell of each param, in param order
//   h <x> <y>                 exit cell of each param, in param order
//   r <record>                template record (same shape as expanded lines)
//   c <callee> <dx> <delta> <instr>
//   f <arg> <sx> <sy> <dx> <dy> <lane> <start> <codes>
//   b <arg> <sx> <sy> <dx> <dy> <lane> <start> <codes>
//   e                         closes the call opened by 'c'
//   endmodule
inline std::string write_hcode(const mapping_result& mr) {
  std::string out = "#hqmap-hcode v1\n";
  auto meta = [&](std::string_view k, const std::string& v) {
    out += "#meta ";
    out += k;
    out += ' ';
    out += v;
    out += '\n';
  };
  meta("mode", "hier");
  meta("main", mr.module_names[mr.main_index]);
  meta("bus_bandwidth", std::to_string(mr.bus_rows));
  meta("swap_time", std::to_string(mr.cfg.swap_time));
  meta("move_time", std::to_string(mr.cfg.move_time));
  meta("swap_cycle_weight", std::to_string(mr.cfg.swap_cycle_weight));
  meta("footprint",
       std::to_string(mr.machine_cols) + " " + std::to_string(mr.machine_rows));
  auto bus_rows = static_cast<int32_t>(mr.bus_rows);

  auto put_cell = [&](cell c) {
    out += ' ';
    detail::append_i32(out, c.x);
    out += ' ';
    detail::append_i32(out, c.y);
  };
  auto put_u64 = [&](uint64_t v) {
    out += ' ';
    detail::append_u64(out, v);
  };
  auto put_record = [&](const record& r) {
    out += "r ";
    detail::append_u64(out, r.start);
    put_u64(r.duration);
    out += ' ';
    out += opcode_name(r.op);
    put_cell(r.a);
    if (!r.one_cell()) put_cell(r.b);
    out += ' ';
    out += mr.tags.name(r.tag);
    out += '\n';
  };
  auto put_transfer = [&](char kind, const transfer_line& tl, uint64_t base) {
    out += kind;
    out += ' ';
    detail::append_u64(out, tl.arg);
    put_cell(tl.src);
    put_cell(tl.dst);
    put_u64(tl.lane);
    put_u64(base + tl.start);
    out += ' ';
    out += tl.codes;
    out += '\n';
  };

  for (const auto& opt : mr.profiles) {
    if (!opt) continue;
    const module_profile& pr = *opt;
    out += "module ";
    out += mr.module_names[pr.module];
    put_u64(pr.shape.width);
    put_u64(pr.shape.height);
    put_u64(pr.n_params);
    put_u64(pr.n_locals);
    put_u64(pr.internal_time);
    put_u64(pr.internal_cycle);
    put_u64(pr.extent_cols);
    put_u64(pr.extent_rows);
    out += '\n';
    for (uint32_t a = 0; a < pr.n_params; ++a) {
      out += 'p';
      put_cell(region_cell(pr.shape, 0, bus_rows, pr.place[a]));
      out += '\n';
    }
    for (const cell& c : pr.final_param_cells) {
      out += 'h';
      put_cell(c);
      out += '\n';
    }
    for (const template_entry& e : pr.templ) {
      if (const record* r = std::get_if<record>(&e)) {
        put_record(*r);
        continue;
      }
      const call_step& cs = pr.calls[std::get<uint32_t>(e)];
      const transfer_set& ts = pr.tsets[cs.tset];
      out += "c ";
      out += mr.module_names[cs.callee];
      out += ' ';
      detail::append_i32(out, cs.dx);
      put_u64(cs.delta);
      put_u64(cs.instr_index);
      out += '\n';
      for (const transfer_line& tl : ts.fwd) put_transfer('f', tl, cs.base);
      for (const transfer_line& tl : ts.bwd) put_transfer('b', tl, cs.base);
      out += "e\n";
    }
    out += "endmodule\n";
  }
  return out;
}

inline mapping_result read_hcode(std::string_view text) {
  mapping_result mr;
  uint32_t line_no = 0;
  size_t pos = 0;
  bool saw_header = false;
  std::string main_name;
  std::unordered_map<std::string, int32_t> by_name;
  // callee names resolve once every section is known; indices stay valid
  // while the vectors behind them grow
  struct pending_callee {
    size_t module;
    size_t call;
    std::string name;
    uint32_t line;
  };
  std::vector<pending_callee> pending;

  bool in_call = false;

  auto err = [&](const std::string& msg) -> parse_error {
    return parse_error({line_no, 1}, msg);
  };
  auto need = [&](const std::vector<std::string_view>& f, size_t n,
                  const char* what) {
    if (f.size() != n)
      throw err(std::string("'") + what + "' line expects " +
                std::to_string(n - 1) + " fields");
  };
  auto parse_cell = [&](std::string_view fx, std::string_view fy) {
    return cell{detail::parse_num<int32_t>(fx, line_no, "x"),
                detail::parse_num<int32_t>(fy, line_no, "y")};
  };
  auto parse_transfer = [&](const std::vector<std::string_view>& f) {
    need(f, 9, "f/b");
    transfer_line tl;
    tl.arg = detail::parse_num<uint32_t>(f[1], line_no, "arg");
    tl.src = parse_cell(f[2], f[3]);
    tl.dst = parse_cell(f[4], f[5]);
    tl.lane = detail::parse_num<uint32_t>(f[6], line_no, "lane");
    tl.start = detail::parse_num<uint64_t>(f[7], line_no, "start");
    tl.codes = std::string(f[8]);
    for (char c : tl.codes)
      if (c != 'S' && c != 'M' && c != 'B') throw err("bad hop code");
    return tl;
  };

  module_profile* cur = nullptr;
  auto bus_row_of = [&] { return static_cast<int32_t>(mr.bus_rows); };

  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!saw_header) {
      if (line != "#hqmap-hcode v1") throw err("missing '#hqmap-hcode v1' header");
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    auto f = detail::split_fields(line);

    if (f[0] == "#meta") {
      if (f.size() < 3) throw err("#meta needs a key and a value");
      if (f[1] == "main") main_name = std::string(f[2]);
      else if (f[1] == "bus_bandwidth")
        mr.bus_rows = detail::parse_num<uint32_t>(f[2], line_no, "bus_bandwidth");
      else if (f[1] == "swap_time")
        mr.cfg.swap_time = detail::parse_num<uint64_t>(f[2], line_no, "swap_time");
      else if (f[1] == "move_time")
        mr.cfg.move_time = detail::parse_num<uint64_t>(f[2], line_no, "move_time");
      else if (f[1] == "swap_cycle_weight")
        mr.cfg.swap_cycle_weight =
            detail::parse_num<uint64_t>(f[2], line_no, "swap_cycle_weight");
      else if (f[1] == "footprint") {
        if (f.size() != 4) throw err("footprint needs two numbers");
        mr.machine_cols = detail::parse_num<uint32_t>(f[2], line_no, "cols");
        mr.machine_rows = detail::parse_num<uint32_t>(f[3], line_no, "rows");
      }
      continue;
    }
    if (f[0] == "module") {
      if (cur) throw err("'module' before 'endmodule'");
      need(f, 10, "module");
      std::string name(f[1]);
      if (by_name.count(name)) throw err("duplicate module section '" + name + "'");
      auto mi = static_cast<int32_t>(mr.profiles.size());
      by_name.emplace(name, mi);
      mr.module_names.push_back(name);
      mr.profiles.emplace_back(module_profile{});
      cur = &**mr.profiles.rbegin();
      cur->module = mi;
      cur->shape.width = detail::parse_num<uint32_t>(f[2], line_no, "width");
      cur->shape.height = detail::parse_num<uint32_t>(f[3], line_no, "height");
      if (cur->shape.width > (1u << 20) || cur->shape.height > (1u << 20))
        throw err("region dimensions out of range");
      cur->n_params = detail::parse_num<uint32_t>(f[4], line_no, "params");
      cur->n_locals = detail::parse_num<uint32_t>(f[5], line_no, "locals");
      cur->internal_time = detail::parse_num<uint64_t>(f[6], line_no, "time");
      cur->internal_cycle = detail::parse_num<uint64_t>(f[7], line_no, "cycle");
      cur->extent_cols = detail::parse_num<uint32_t>(f[8], line_no, "ext_cols");
      cur->extent_rows = detail::parse_num<uint32_t>(f[9], line_no, "ext_rows");
      if (cur->shape.cells() < cur->n_params + cur->n_locals)
        throw err("region too small for its qubits");
      continue;
    }
    if (!cur) throw err("directive outside a module section");

    if (f[0] == "p") {
      need(f, 3, "p");
      cell c = parse_cell(f[1], f[2]);
      if (c.y != bus_row_of() || c.x < 0 ||
          static_cast<uint32_t>(c.x) >= cur->shape.width)
        throw err("param entry cell outside the region's first row");
      if (cur->place.size() == cur->n_params) throw err("too many 'p' lines");
      cur->place.push_back(static_cast<uint32_t>(c.x));
      continue;
    }
    if (f[0] == "h") {
      need(f, 3, "h");
      if (cur->final_param_cells.size() == cur->n_params)
        throw err("too many 'h' lines");
      cur->final_param_cells.push_back(parse_cell(f[1], f[2]));
      continue;
    }
    if (f[0] == "r") {
      if (f.size() != 7 && f.size() != 9)
        throw err("'r' line expects 6 or 8 record fields");
      record r;
      r.start = detail::parse_num<uint64_t>(f[1], line_no, "start");
      r.duration = detail::parse_num<uint64_t>(f[2], line_no, "duration");
      auto op = lookup_opcode(f[3]);
      if (!op) throw err("unknown opcode '" + std::string(f[3]) + "'");
      r.op = *op;
      r.a = parse_cell(f[4], f[5]);
      r.b = f.size() == 9 ? parse_cell(f[6], f[7]) : r.a;
      if (f.size() == 9 && r.b == r.a)
        throw err("two-cell record names the same cell twice");
      r.tag = mr.tags.intern(f.back());
      cur->templ.emplace_back(r);
      continue;
    }
    if (f[0] == "c") {
      if (in_call) throw err("'c' before the previous call's 'e'");
      need(f, 5, "c");
      call_step cs;
      cs.dx = detail::parse_num<int32_t>(f[2], line_no, "dx");
      cs.delta = detail::parse_num<uint64_t>(f[3], line_no, "delta");
      cs.instr_index = detail::parse_num<uint32_t>(f[4], line_no, "instr");
      // read-back transfers stay absolute under a zero base, one set per call
      cs.tset = static_cast<uint32_t>(cur->tsets.size());
      cur->tsets.emplace_back();
      cur->calls.push_back(cs);
      cur->templ.emplace_back(static_cast<uint32_t>(cur->calls.size() - 1));
      pending.push_back({static_cast<size_t>(cur->module), cur->calls.size() - 1,
                         std::string(f[1]), line_no});
      in_call = true;
      continue;
    }
    if (f[0] == "f" || f[0] == "b") {
      if (!in_call) throw err("transfer line outside a call");
      auto tl = parse_transfer(f);
      transfer_set& ts = cur->tsets[cur->calls.back().tset];
      if (f[0] == "f") ts.fwd.push_back(std::move(tl));
      else ts.bwd.push_back(std::move(tl));
      continue;
    }
    if (f[0] == "e") {
      if (!in_call) throw err("'e' without an open call");
      const transfer_set& ts = cur->tsets[cur->calls.back().tset];
      if (ts.fwd.size() != ts.bwd.size())
        throw err("call has unbalanced transfer lines");
      in_call = false;
      continue;
    }
    if (f[0] == "endmodule") {
      if (in_call) throw err("'endmodule' inside a call");
      if (cur->place.size() != cur->n_params ||
          cur->final_param_cells.size() != cur->n_params)
        throw err("module section is missing param cell lines");
      cur = nullptr;
      continue;
    }
    throw err("unknown directive '" + std::string(f[0]) + "'");
  }
  if (!saw_header) throw parse_error({1, 1}, "missing '#hqmap-hcode v1' header");
  if (cur) throw parse_error({line_no, 1}, "unterminated module section");

  for (const auto& pc : pending) {
    auto it = by_name.find(pc.name);
    if (it == by_name.end())
      throw parse_error({pc.line, 1},
                        "call references unknown module '" + pc.name + "'");
    mr.profiles[pc.module]->calls[pc.call].callee = it->second;
  }
  auto mit = by_name.find(main_name);
  if (mit == by_name.end())
    throw parse_error({1, 1}, "meta 'main' names no module section");
  mr.main_index = mit->second;
  mr.cfg.bus_bandwidth = mr.bus_rows;
  recompute_profile_stats(mr);
  return mr;
}

} // namespace hqmap
