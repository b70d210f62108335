#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqmap/arch/config.hpp"
#include "hqmap/arch/layout.hpp"
#include "hqmap/code/record.hpp"
#include "hqmap/code/syscode_io.hpp"
#include "hqmap/map/profile.hpp"
#include "hqmap/map/scheduler.hpp"
#include "hqmap/place/placement.hpp"
#include "hqmap/qasm/ast.hpp"

namespace hqmap {

struct mapping_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void recompute_profile_stats(mapping_result& mr);

namespace detail {

// timelines beyond this cannot be trusted to sums of uint64 shifts
constexpr uint64_t time_ceiling = uint64_t{1} << 62;

inline uint64_t sat_add(uint64_t a, uint64_t b) {
  return b > UINT64_MAX - a ? UINT64_MAX : a + b;
}

inline uint64_t sat_mul(uint64_t a, uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > UINT64_MAX / b ? UINT64_MAX : a * b;
}

class frame_builder;

// Maps modules on demand and caches the result. With memoization off the
// profile is rebuilt at every call site; the build is deterministic, so the
// rebuilt profile is identical and the output does not change.
class program_mapper {
public:
  program_mapper(const program& p, const arch_config& cfg, uint32_t bus_rows,
                 std::vector<std::optional<module_profile>>& profiles,
                 tag_table& tags)
      : p_(p), cfg_(cfg), bus_rows_(bus_rows), profiles_(profiles), tags_(tags) {}

  const module_profile& get(int32_t mi);

  const program& prog() const { return p_; }
  const arch_config& cfg() const { return cfg_; }
  uint32_t bus_rows() const { return bus_rows_; }
  tag_table& tags() { return tags_; }

private:
  const program& p_;
  const arch_config& cfg_;
  uint32_t bus_rows_;
  std::vector<std::optional<module_profile>>& profiles_;
  tag_table& tags_;
};

// Maps one module in a pristine frame: its region at x = 0 above the bus
// strip, clock starting at zero, nested calls claiming slots to the right.
// The result only ever gets an x offset and a time shift when a caller
// pastes it, so everything recorded here is frame-relative.
class frame_builder {
public:
  frame_builder(program_mapper& ctx, int32_t mi)
      : ctx_(ctx), m_(ctx.prog().modules[mi]),
        bus_rows_(static_cast<int32_t>(ctx.bus_rows())),
        sched_(field_, ctx.cfg(), static_cast<int32_t>(ctx.bus_rows()), recs_, pos_),
        lane_free_(ctx.bus_rows(), 0) {
    prof_.module = mi;
    prof_.n_params = m_.param_count();
    prof_.n_locals = m_.local_count();
    prof_.shape = region_shape_for(m_.param_count(), m_.local_count());
    prof_.extent_cols = prof_.shape.width;
    prof_.extent_rows = prof_.shape.height;
    run();
  }

  module_profile take() { return std::move(prof_); }

private:
  void run() {
    place_qubits();
    region_slot own = slots_.allocate(prof_.shape.width);
    entry_barrier();
    for (size_t i = 0; i < m_.body.size(); ++i) map_instr(m_.body[i], i);
    exit_barrier();
    slots_.deallocate(own);
    for (uint32_t a = 0; a < prof_.n_params; ++a)
      prof_.final_param_cells.push_back(pos_[a]);
  }

  cell home_cell(uint32_t slot) const {
    return region_cell(prof_.shape, 0, bus_rows_, prof_.place[slot]);
  }

  void place_qubits() {
    uint32_t n = m_.qubit_count();
    if (n == 0) return;
    if (ctx_.cfg().placement == placement_mode::optimized)
      prof_.place = optimize_placement(build_interaction_graph(m_), prof_.shape,
                                       prof_.n_params);
    else
      prof_.place = fcfs_placement(n);
    pos_.resize(n);
    for (uint32_t s = 0; s < n; ++s) {
      cell c = home_cell(s);
      pos_[s] = c;
      field_.at(c).occupant = static_cast<int32_t>(s);
    }
  }

  // INIT births every local and padding cell, then a there-and-back chain
  // of SYNCs down the snake walk joins the whole region onto one clock.
  void entry_barrier() {
    uint32_t n_cells = prof_.shape.cells();
    if (n_cells == 0) return;
    uint32_t mb = ctx_.tags().intern("mb:" + m_.name);
    uint32_t in = ctx_.tags().intern("in:" + m_.name);
    uint32_t sy = ctx_.tags().intern("sy:" + m_.name);

    std::vector<bool> is_param(n_cells, false);
    for (uint32_t a = 0; a < prof_.n_params; ++a) is_param[prof_.place[a]] = true;

    bool first = true;
    for (uint32_t ci = 0; ci < n_cells; ++ci) {
      if (is_param[ci]) continue;
      cell c = region_cell(prof_.shape, 0, bus_rows_, ci);
      recs_.push_back({0, 0, opcode::init, c, c, first ? mb : in});
      first = false;
      cell_state& st = field_.at(c);
      st.time = 0;
      st.level = 0;
    }
    snake_sync(0, first ? mb : sy, sy);
    drain();
  }

  void exit_barrier() {
    uint32_t n_cells = prof_.shape.cells();
    if (n_cells == 0) return;
    uint64_t t = 0;
    for (uint32_t ci = 0; ci < n_cells; ++ci)
      t = std::max(t, field_.at(region_cell(prof_.shape, 0, bus_rows_, ci)).time);
    if (t >= detail::time_ceiling)
      throw mapping_error("mapped timeline exceeds the representable range");
    snake_sync(t, ctx_.tags().intern("me:" + m_.name),
               ctx_.tags().intern("sy:" + m_.name));
    drain();
    prof_.internal_time = t;
    prof_.internal_cycle =
        field_.at(region_cell(prof_.shape, 0, bus_rows_, 0)).level;
  }

  void snake_sync(uint64_t at, uint32_t first_tag, uint32_t rest_tag) {
    auto path = snake_path(prof_.shape, 0, bus_rows_);
    if (path.empty()) return;
    if (path.size() == 1) {
      recs_.push_back({at, 0, opcode::sync, path[0], path[0], first_tag});
      field_.at(path[0]).time = at;
      return;
    }
    auto join = [&](cell a, cell b, uint32_t tag) {
      recs_.push_back({at, 0, opcode::sync, a, b, tag});
      auto [sa, sb] = field_.at2(a, b);
      uint64_t lv = std::max(sa.level, sb.level);
      sa.level = sb.level = lv;
      sa.time = sb.time = at;
    };
    for (size_t k = 0; k + 1 < path.size(); ++k)
      join(path[k], path[k + 1], k == 0 ? first_tag : rest_tag);
    for (size_t k = path.size() - 1; k > 0; --k)
      join(path[k], path[k - 1], rest_tag);
  }

  void map_instr(const instr& in, size_t idx) {
    switch (in.kind) {
    case instr_kind::gate1:
      memos_.clear();
      sched_.schedule_1q(in.qubits[0].slot, in.gate, gate_tag(idx));
      drain();
      break;
    case instr_kind::gate2:
      memos_.clear();
      sched_.schedule_2q(in.qubits[0].slot, in.qubits[1].slot, in.gate,
                         gate_tag(idx), route_tag(idx));
      drain();
      break;
    case instr_kind::call:
      map_call(in, static_cast<uint32_t>(idx));
      break;
    }
  }

  uint32_t gate_tag(size_t i) {
    return ctx_.tags().intern("g:" + m_.name + "#" + std::to_string(i));
  }
  uint32_t route_tag(size_t i) {
    return ctx_.tags().intern("r:" + m_.name + "#" + std::to_string(i));
  }

  // One mapped call of a completed donor site: everything needed to replay
  // it later as a pure time shift. Valid while no gate disturbs the frame,
  // so by then every clock the donor consulted sits at or below the
  // frontier and the donor's relative schedule transplants exactly.
  struct site_memo {
    int32_t callee = -1;
    int32_t dx = 0;
    bool eligible = false; // swap hops displace bystanders; those rebuild
    uint32_t tset = 0;
    std::vector<cell> homes;
    std::vector<uint32_t> fwd_hops; // per arg, for the cycle base formula
    std::vector<uint32_t> bwd_hops;
    std::vector<uint64_t> bwd_end;  // per arg, relative return-home clock
    std::vector<std::pair<uint32_t, uint64_t>> lane_ends; // emission order
    uint64_t rel_delta = 0;
    uint64_t rel_frontier = 0;
  };

  site_memo* find_memo(const instr& in, int32_t dx, uint32_t n_args) {
    for (site_memo& m : memos_) {
      if (m.callee != in.callee_index || m.dx != dx || m.homes.size() != n_args)
        continue;
      bool same = true;
      for (uint32_t a = 0; a < n_args && same; ++a)
        same = pos_[in.qubits[a].slot] == m.homes[a];
      if (same) return &m;
    }
    return nullptr;
  }

  void map_call(const instr& in, uint32_t idx) {
    if (in.callee_index < 0)
      throw mapping_error("call target not resolved; validate before mapping");
    const module_profile& callee = ctx_.get(in.callee_index);

    auto n_args = static_cast<uint32_t>(in.qubits.size());
    region_slot slot = slots_.allocate(callee.extent_cols);

    call_step cs;
    cs.callee = in.callee_index;
    cs.dx = slot.x0;
    cs.instr_index = idx;
    cs.base = frontier_;

    site_memo* seen = find_memo(in, slot.x0, n_args);
    if (seen && seen->eligible)
      replay_call(cs, *seen, callee, n_args);
    else
      build_call(in, cs, callee, slot, n_args, seen == nullptr);

    slots_.deallocate(slot);
    prof_.extent_cols = std::max(
        prof_.extent_cols, static_cast<uint32_t>(slot.x0) + callee.extent_cols);
    prof_.extent_rows = std::max(prof_.extent_rows, callee.extent_rows);

    prof_.calls.push_back(cs);
    prof_.templ.emplace_back(static_cast<uint32_t>(prof_.calls.size() - 1));
  }

  void build_call(const instr& in, call_step& cs, const module_profile& callee,
                  region_slot slot, uint32_t n_args, bool record_memo) {
    std::vector<cell> home(n_args);
    for (uint32_t a = 0; a < n_args; ++a) home[a] = pos_[in.qubits[a].slot];

    // arguments ride to the callee's entry cells; the callee starts once
    // the last one lands and nothing before the frame frontier
    transfer_set ts;
    uint64_t ready = frontier_;
    uint64_t c_base = 0;
    for (uint32_t a = 0; a < n_args; ++a) {
      cell dst = region_cell(callee.shape, slot.x0, bus_rows_, callee.place[a]);
      transfer_line tl = run_transfer(in.qubits[a].slot, dst, a);
      ready = std::max(ready, tl.start + transfer_duration(tl, ctx_.cfg()));
      c_base = std::max(c_base, field_.at(dst).level);
      ts.fwd.push_back(std::move(tl));
    }
    if (callee.internal_time >= detail::time_ceiling - ready)
      throw mapping_error("mapped timeline exceeds the representable range");
    cs.delta = ready;

    // paste the callee: at exit its whole region sits on one clock, locals
    // die in place, params wait at their final cells
    uint64_t t_exit = ready + callee.internal_time;
    uint64_t lvl_exit = c_base + callee.internal_cycle;
    for (uint32_t ci = 0; ci < callee.shape.cells(); ++ci) {
      cell_state& st = field_.at(region_cell(callee.shape, slot.x0, bus_rows_, ci));
      st.occupant = -1;
      st.time = t_exit;
      st.level = lvl_exit;
    }
    for (uint32_t a = 0; a < n_args; ++a) {
      uint32_t q = in.qubits[a].slot;
      cell c{callee.final_param_cells[a].x + slot.x0, callee.final_param_cells[a].y};
      field_.at(c).occupant = static_cast<int32_t>(q);
      pos_[q] = c;
    }

    // deepest original row returns first so the swap chains push displaced
    // neighbours back exactly where they started
    std::vector<uint32_t> order(n_args);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t i, uint32_t j) {
      if (home[i].y != home[j].y) return home[i].y > home[j].y;
      return i < j;
    });

    uint64_t done = t_exit;
    for (uint32_t a : order) {
      transfer_line tl = run_transfer(in.qubits[a].slot, home[a], a);
      done = std::max(done, tl.start + transfer_duration(tl, ctx_.cfg()));
      ts.bwd.push_back(std::move(tl));
    }
    frontier_ = std::max(frontier_, done);

    // starts become call-relative so the set can serve later repeats
    for (auto* side : {&ts.fwd, &ts.bwd})
      for (transfer_line& tl : *side) tl.start -= cs.base;
    cs.tset = static_cast<uint32_t>(prof_.tsets.size());
    prof_.tsets.push_back(std::move(ts));
    if (record_memo) store_memo(cs, std::move(home));
  }

  void store_memo(const call_step& cs, std::vector<cell> home) {
    const transfer_set& ts = prof_.tsets[cs.tset];
    site_memo m;
    m.callee = cs.callee;
    m.dx = cs.dx;
    m.tset = cs.tset;
    m.homes = std::move(home);
    m.eligible = true;
    auto n_args = static_cast<uint32_t>(ts.fwd.size());
    m.fwd_hops.resize(n_args);
    m.bwd_hops.resize(n_args);
    m.bwd_end.resize(n_args);
    for (const auto* side : {&ts.fwd, &ts.bwd})
      for (const transfer_line& tl : *side) {
        if (tl.codes.find('S') != std::string::npos) m.eligible = false;
        uint64_t end = tl.start + transfer_duration(tl, ctx_.cfg());
        uint32_t hops = static_cast<uint32_t>(tl.codes.size());
        if (side == &ts.fwd) {
          m.fwd_hops[tl.arg] = hops;
        } else {
          m.bwd_hops[tl.arg] = hops;
          m.bwd_end[tl.arg] = end;
        }
        m.lane_ends.emplace_back(tl.lane, end);
      }
    m.rel_delta = cs.delta - cs.base;
    m.rel_frontier = frontier_ - cs.base;
    memos_.push_back(std::move(m));
  }

  // the donor's relative schedule, shifted whole onto the current frontier;
  // only the argument home cells and the shared clocks move, everything the
  // call would touch in between keeps its stale but dominated history
  void replay_call(call_step& cs, const site_memo& m,
                   const module_profile& callee, uint32_t n_args) {
    if (m.rel_frontier > detail::time_ceiling - cs.base)
      throw mapping_error("mapped timeline exceeds the representable range");
    uint64_t w = ctx_.cfg().swap_cycle_weight;
    uint64_t c_base = 0;
    for (uint32_t a = 0; a < n_args; ++a)
      c_base = std::max(c_base, field_.at(m.homes[a]).level + m.fwd_hops[a] * w);
    uint64_t lvl_exit = c_base + callee.internal_cycle;
    for (uint32_t a = 0; a < n_args; ++a) {
      cell_state& st = field_.at(m.homes[a]);
      st.time = cs.base + m.bwd_end[a];
      st.level = lvl_exit + m.bwd_hops[a] * w;
    }
    for (const auto& [lane, end] : m.lane_ends) lane_free_[lane] = cs.base + end;
    frontier_ = cs.base + m.rel_frontier;
    cs.delta = cs.base + m.rel_delta;
    cs.tset = m.tset;
  }

  // One argument, one direction. Picks the least-loaded lane, pins every
  // hop up front, then starts late enough that the chain runs back to back
  // with no cell busy and the lane window exclusive.
  transfer_line run_transfer(uint32_t q, cell dst, uint32_t arg) {
    const arch_config& cfg = ctx_.cfg();
    cell src = pos_[q];
    uint32_t lane = 0;
    for (uint32_t l = 1; l < lane_free_.size(); ++l)
      if (lane_free_[l] < lane_free_[lane]) lane = l;

    auto path = transfer_path(src, dst, bus_rows_, lane);
    size_t hops = path.size() - 1;
    std::string codes(hops, 'B');
    std::vector<uint64_t> prefix(hops + 1, 0);
    for (size_t k = 0; k < hops; ++k) {
      char c = 'B';
      if (path[k].y >= bus_rows_ && path[k + 1].y >= bus_rows_)
        c = field_.at(path[k + 1]).occupant >= 0 ? 'S' : 'M';
      codes[k] = c;
      prefix[k + 1] = prefix[k] + hop_duration(c, cfg);
    }

    uint64_t base = std::max(frontier_, lane_free_[lane]);
    for (size_t j = 0; j < path.size(); ++j) {
      uint64_t touched = prefix[j == 0 ? 0 : j - 1];
      uint64_t busy = field_.at(path[j]).time;
      if (busy > touched && busy - touched > base) base = busy - touched;
    }

    for (size_t k = 0; k < hops; ++k) {
      uint64_t end = base + prefix[k + 1];
      auto [sf, st] = field_.at2(path[k], path[k + 1]);
      assert(sf.occupant == static_cast<int32_t>(q));
      assert(base + prefix[k] >= sf.time && base + prefix[k] >= st.time);
      if (codes[k] == 'S') {
        uint64_t lv = std::max(sf.level, st.level) + cfg.swap_cycle_weight;
        sf.level = st.level = lv;
        sf.time = st.time = end;
        std::swap(sf.occupant, st.occupant);
        pos_[sf.occupant] = path[k];
        pos_[q] = path[k + 1];
      } else {
        if (st.occupant >= 0)
          throw std::logic_error("transfer hop into an occupied cell");
        st.level = sf.level + cfg.swap_cycle_weight;
        sf.time = st.time = end;
        st.occupant = static_cast<int32_t>(q);
        sf.occupant = -1;
        pos_[q] = path[k + 1];
      }
    }
    lane_free_[lane] = base + prefix[hops];
    return {arg, src, dst, lane, base, std::move(codes)};
  }

  void drain() {
    for (const record& r : recs_) prof_.templ.emplace_back(r);
    recs_.clear();
  }

  program_mapper& ctx_;
  const module_def& m_;
  int32_t bus_rows_;
  module_profile prof_;
  cell_field field_;
  std::vector<cell> pos_;
  std::vector<record> recs_;
  gate_scheduler sched_;
  slot_stack slots_;
  std::vector<uint64_t> lane_free_;
  std::vector<site_memo> memos_;
  uint64_t frontier_ = 0;
};

inline const module_profile& program_mapper::get(int32_t mi) {
  if (cfg_.memoize && profiles_[mi]) return *profiles_[mi];
  frame_builder fb(*this, mi);
  profiles_[mi] = fb.take();
  return *profiles_[mi];
}

} // namespace detail

inline mapping_result map_program(const program& p, const arch_config& user_cfg) {
  if (p.main_index < 0) throw mapping_error("program has no main module");
  mapping_result mr;
  mr.cfg = user_cfg;
  mr.cfg.bus_bandwidth = resolved_bus_bandwidth(user_cfg, p);
  mr.bus_rows = mr.cfg.bus_bandwidth;
  mr.main_index = p.main_index;
  mr.module_names.reserve(p.modules.size());
  for (const auto& m : p.modules) mr.module_names.push_back(m.name);
  mr.profiles.resize(p.modules.size());
  detail::program_mapper pm(p, mr.cfg, mr.bus_rows, mr.profiles, mr.tags);
  pm.get(p.main_index);
  recompute_profile_stats(mr);
  const module_profile& mp = mr.main_profile();
  mr.machine_cols = mp.extent_cols;
  mr.machine_rows = mr.bus_rows + mp.extent_rows;
  return mr;
}

// Rebuilds every derived count from the templates alone, so readers of the
// compact form get the same numbers the mapper saw. Gate and routing records
// are told apart by their tag family. Calls of the same callee and repeats
// of the same transfer set are tallied once and multiplied out, which keeps
// this linear in the template rather than in the call fan-out.
inline void recompute_profile_stats(mapping_result& mr) {
  std::vector<uint8_t> seen(mr.profiles.size(), 0);
  auto visit = [&](auto&& self, int32_t mi) -> void {
    if (seen[mi]) return;
    seen[mi] = 1;
    module_profile& pr = *mr.profiles[mi];
    for (const call_step& cs : pr.calls) self(self, cs.callee);

    pr.op_counts = {};
    pr.gate_counts = {};
    pr.hops_route = pr.hops_transfer = pr.cnot_instrs = 0;
    pr.expanded_records = 0;
    pr.peak_cells = pr.shape.cells();

    std::vector<uint64_t> call_count(mr.profiles.size(), 0);
    std::vector<uint64_t> set_count(pr.tsets.size(), 0);
    for (const template_entry& e : pr.templ) {
      if (const record* r = std::get_if<record>(&e)) {
        pr.op_counts[static_cast<size_t>(r->op)]++;
        pr.expanded_records++;
        std::string_view nm = mr.tags.name(r->tag);
        if (nm.size() > 1 && nm[1] == ':') {
          if (nm[0] == 'g') {
            pr.gate_counts[static_cast<size_t>(r->op)]++;
            if (!r->one_cell()) pr.cnot_instrs++;
          } else if (nm[0] == 'r') {
            pr.hops_route++;
          }
        }
        continue;
      }
      const call_step& cs = pr.calls[std::get<uint32_t>(e)];
      ++call_count[cs.callee];
      ++set_count[cs.tset];
    }
    for (size_t c = 0; c < call_count.size(); ++c) {
      uint64_t n = call_count[c];
      if (!n) continue;
      const module_profile& cal = *mr.profiles[c];
      for (size_t o = 0; o < opcode_count; ++o)
        pr.op_counts[o] =
            detail::sat_add(pr.op_counts[o], detail::sat_mul(cal.op_counts[o], n));
      for (size_t g = 0; g < gate_kind_count; ++g)
        pr.gate_counts[g] = detail::sat_add(pr.gate_counts[g],
                                            detail::sat_mul(cal.gate_counts[g], n));
      pr.hops_route =
          detail::sat_add(pr.hops_route, detail::sat_mul(cal.hops_route, n));
      pr.hops_transfer =
          detail::sat_add(pr.hops_transfer, detail::sat_mul(cal.hops_transfer, n));
      pr.cnot_instrs =
          detail::sat_add(pr.cnot_instrs, detail::sat_mul(cal.cnot_instrs, n));
      pr.expanded_records = detail::sat_add(
          pr.expanded_records, detail::sat_mul(cal.expanded_records, n));
      pr.peak_cells = std::max(pr.peak_cells, pr.shape.cells() + cal.peak_cells);
    }
    for (size_t s = 0; s < set_count.size(); ++s) {
      uint64_t n = set_count[s];
      if (!n) continue;
      uint64_t swaps = 0, moves = 0;
      for (const auto* side : {&pr.tsets[s].fwd, &pr.tsets[s].bwd})
        for (const transfer_line& tl : *side)
          for (char c : tl.codes) ++(c == 'S' ? swaps : moves);
      pr.op_counts[static_cast<size_t>(opcode::swap)] = detail::sat_add(
          pr.op_counts[static_cast<size_t>(opcode::swap)], detail::sat_mul(swaps, n));
      pr.op_counts[static_cast<size_t>(opcode::move)] = detail::sat_add(
          pr.op_counts[static_cast<size_t>(opcode::move)], detail::sat_mul(moves, n));
      pr.hops_transfer =
          detail::sat_add(pr.hops_transfer, detail::sat_mul(swaps + moves, n));
      pr.expanded_records =
          detail::sat_add(pr.expanded_records, detail::sat_mul(swaps + moves, n));
    }
  };
  for (size_t mi = 0; mi < mr.profiles.size(); ++mi)
    if (mr.profiles[mi]) visit(visit, static_cast<int32_t>(mi));
}

namespace detail {

inline uint32_t remap_tag(const mapping_result& mr, syscode& out,
                          std::vector<int32_t>& cache, uint32_t id) {
  if (cache[id] < 0)
    cache[id] = static_cast<int32_t>(out.tags.intern(mr.tags.name(id)));
  return static_cast<uint32_t>(cache[id]);
}

inline void emit_transfer_records(const mapping_result& mr, const transfer_line& tl,
                                  int32_t dx, uint64_t delta, uint32_t tag,
                                  syscode& out) {
  cell src{tl.src.x + dx, tl.src.y};
  cell dst{tl.dst.x + dx, tl.dst.y};
  auto path = transfer_path(src, dst, static_cast<int32_t>(mr.bus_rows), tl.lane);
  assert(path.size() == tl.codes.size() + 1);
  uint64_t t = delta + tl.start;
  for (size_t k = 0; k < tl.codes.size(); ++k) {
    uint64_t dur = hop_duration(tl.codes[k], mr.cfg);
    out.records.push_back({t, dur, hop_opcode(tl.codes[k]), path[k], path[k + 1], tag});
    t += dur;
  }
}

inline void expand_frame(const mapping_result& mr, const module_profile& pr,
                         int32_t dx, uint64_t delta, syscode& out,
                         std::vector<int32_t>& tag_cache) {
  const std::string& name = mr.module_names[pr.module];
  for (const template_entry& e : pr.templ) {
    if (const record* r = std::get_if<record>(&e)) {
      record rec = *r;
      rec.start += delta;
      rec.a.x += dx;
      rec.b.x += dx;
      rec.tag = remap_tag(mr, out, tag_cache, rec.tag);
      out.records.push_back(rec);
      continue;
    }
    const call_step& cs = pr.calls[std::get<uint32_t>(e)];
    const transfer_set& ts = pr.tsets[cs.tset];
    std::string stem = name + "#" + std::to_string(cs.instr_index) + ":";
    for (const transfer_line& tl : ts.fwd)
      emit_transfer_records(mr, tl, dx, delta + cs.base,
                            out.tags.intern("pf:" + stem + std::to_string(tl.arg)),
                            out);
    expand_frame(mr, *mr.profiles[cs.callee], dx + cs.dx, delta + cs.delta, out,
                 tag_cache);
    for (const transfer_line& tl : ts.bwd)
      emit_transfer_records(mr, tl, dx, delta + cs.base,
                            out.tags.intern("pb:" + stem + std::to_string(tl.arg)),
                            out);
  }
}

} // namespace detail

// Recursive template walk: forward hops, then the callee's content, then the
// backward hops. Per cell the emitted stream is time-ordered, which is what
// the replay checker relies on.
inline syscode expand_mapping(const mapping_result& mr) {
  syscode out;
  out.meta_set("mode", "hier");
  out.meta_set("main", mr.module_names[mr.main_index]);
  out.meta_set("bus_bandwidth", std::to_string(mr.bus_rows));
  out.meta_set("qubits", std::to_string(mr.main_profile().peak_cells));
  out.meta_set("swap_time", std::to_string(mr.cfg.swap_time));
  out.meta_set("move_time", std::to_string(mr.cfg.move_time));
  out.meta_set("swap_cycle_weight", std::to_string(mr.cfg.swap_cycle_weight));
  out.meta_set("footprint",
               std::to_string(mr.machine_cols) + " " + std::to_string(mr.machine_rows));
  const module_profile& mp = mr.main_profile();
  if (mp.expanded_records < (uint64_t{1} << 27))
    out.records.reserve(mp.expanded_records);
  std::vector<int32_t> tag_cache(mr.tags.size(), -1);
  detail::expand_frame(mr, mp, 0, 0, out, tag_cache);
  return out;
}

} // namespace hqmap
