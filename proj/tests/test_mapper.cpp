#include <catch2/catch_amalgamated.hpp>

#include "hqmap/bench/generate.hpp"
#include "hqmap/code/hcode_io.hpp"
#include "hqmap/map/flat_mapper.hpp"
#include "hqmap/map/hier_mapper.hpp"
#include "hqmap/qasm/flatten.hpp"
#include "hqmap/qasm/parser.hpp"
#include "hqmap/report/oracle.hpp"

#include <array>
#include <map>
#include <optional>
#include <tuple>

using namespace hqmap;

namespace {

// one logical instruction as the tracker recovers it: opcode, operand ids
using logical_op = std::array<uint32_t, 3>;

std::vector<logical_op> flat_stream(const flat_program& fp) {
  std::vector<logical_op> out;
  out.reserve(fp.instrs.size());
  for (const flat_instr& g : fp.instrs)
    out.push_back({static_cast<uint32_t>(to_opcode(g.gate)), g.q0, g.q1});
  return out;
}

// replays expanded records, following every qubit through moves and swap
// chains, and recovers the logical instruction stream. fcfs placement only:
// it assumes locals are initialised in declaration order.
std::vector<logical_op> replay_worldlines(const program& p,
                                          const syscode& code) {
  std::map<std::string, uint32_t, std::less<>> locals;
  for (const module_def& m : p.modules) locals[m.name] = m.local_count();

  std::map<std::pair<int32_t, int32_t>, int64_t> occ; // cell -> id, -2 dead
  auto get = [&](cell c) -> std::optional<int64_t> {
    auto it = occ.find({c.x, c.y});
    if (it == occ.end()) return std::nullopt;
    return it->second;
  };
  auto set = [&](cell c, std::optional<int64_t> v) {
    if (v) occ[{c.x, c.y}] = *v;
    else occ.erase({c.x, c.y});
  };

  std::vector<logical_op> out;
  int64_t next_id = 0;
  uint32_t run_births = 0;
  bool prev_init = false;

  for (size_t i = 0; i < code.records.size(); ++i) {
    const record& r = code.records[i];
    std::string_view name = code.tags.name(r.tag);
    INFO("record " << i << ": " << name << " at (" << r.a.x << "," << r.a.y
                   << ")-(" << r.b.x << "," << r.b.y << ")");

    if (r.op == opcode::init) {
      if (!prev_init) {
        auto it = locals.find(name.substr(3));
        REQUIRE(it != locals.end());
        run_births = it->second;
      }
      prev_init = true;
      if (run_births > 0) {
        set(r.a, next_id++);
        --run_births;
      } else {
        set(r.a, -2);
      }
      continue;
    }
    prev_init = false;

    if (r.op == opcode::sync) continue;

    bool logical = name.size() > 1 && name[0] == 'g' && name[1] == ':';
    if (logical) {
      auto ia = get(r.a);
      REQUIRE(ia);
      REQUIRE(*ia >= 0);
      int64_t ib = *ia;
      if (!r.one_cell()) {
        auto vb = get(r.b);
        REQUIRE(vb);
        REQUIRE(*vb >= 0);
        ib = *vb;
      }
      out.push_back({static_cast<uint32_t>(r.op), static_cast<uint32_t>(*ia),
                     static_cast<uint32_t>(ib)});
      continue;
    }

    if (r.op == opcode::move) {
      auto ia = get(r.a);
      REQUIRE(ia);
      REQUIRE(*ia >= 0); // moves always carry a live qubit
      auto vb = get(r.b);
      REQUIRE(!(vb && *vb >= 0)); // never into a live cell
      set(r.b, *ia);
      set(r.a, std::nullopt);
      continue;
    }

    REQUIRE(r.op == opcode::swap);
    auto va = get(r.a);
    auto vb = get(r.b);
    REQUIRE(((va && *va >= 0) || (vb && *vb >= 0)));
    set(r.a, vb);
    set(r.b, va);
  }
  return out;
}

} // namespace

TEST_CASE("two empty calls trace end to end") {
  program p = parse_program(R"(
    module sub(qbit a) {}
    module main() {
      qbit q;
      sub(q);
      sub(q);
    }
  )");
  arch_config cfg;
  mapping_result mr = map_program(p, cfg);

  REQUIRE(mr.bus_rows == 1); // widest callee takes one argument
  CHECK(mr.machine_cols == 3);
  CHECK(mr.machine_rows == 2);

  const module_profile& main = mr.main_profile();
  CHECK(main.internal_time == 160);
  CHECK(main.internal_cycle == 16);
  CHECK(main.extent_cols == 3);
  CHECK(main.extent_rows == 1);
  CHECK(main.peak_cells == 2);
  CHECK(main.hops_transfer == 16);
  CHECK(main.hops_route == 0);
  CHECK(main.op_counts[static_cast<size_t>(opcode::move)] == 16);
  CHECK(main.op_counts[static_cast<size_t>(opcode::init)] == 1);
  CHECK(main.op_counts[static_cast<size_t>(opcode::sync)] == 6);
  CHECK(main.expanded_records == 23);

  REQUIRE(main.calls.size() == 2);
  CHECK(main.calls[0].dx == 2);
  CHECK(main.calls[0].delta == 40);
  CHECK(main.calls[1].dx == 2);
  CHECK(main.calls[1].delta == 120);
  CHECK(main.calls[1].tset == main.calls[0].tset); // identical site, shared set
  const transfer_set& ts0 = main.tsets[main.calls[0].tset];
  REQUIRE(ts0.fwd.size() == 1);
  CHECK(main.calls[0].base + ts0.fwd[0].start == 0);
  CHECK(ts0.fwd[0].codes == "BBBB");
  CHECK(ts0.fwd[0].lane == 0);
  CHECK(main.calls[0].base + ts0.bwd[0].start == 40);
  CHECK(ts0.bwd[0].codes == "BBBB");
  CHECK(main.calls[1].base + ts0.fwd[0].start == 80);

  syscode code = expand_mapping(mr);
  CHECK(code.meta_get("mode") == "hier");
  CHECK(code.meta_get("footprint") == "3 2");
  REQUIRE(code.records.size() == 23);
  CHECK(code.records[0].op == opcode::init);
  CHECK(code.tags.name(code.records[0].tag) == "mb:main");
  record pf = code.records[2];
  CHECK(pf.op == opcode::move);
  CHECK(pf.start == 0);
  CHECK(pf.duration == 10);
  CHECK(pf.a == cell{0, 1});
  CHECK(pf.b == cell{0, 0});
  CHECK(code.tags.name(pf.tag) == "pf:main#0:0");
  CHECK(code.records[6].start == 40);
  CHECK(code.tags.name(code.records[6].tag) == "mb:sub");
  CHECK(code.records[12].start == 80);
  CHECK(code.records[22].op == opcode::sync);
  CHECK(code.records[22].start == 160);
  CHECK(code.tags.name(code.records[22].tag) == "me:main");

  replay_stats st = replay_syscode(code);
  CHECK(st.clean());
  CHECK(st.exec_time == 160);
  CHECK(st.depth == 16);
  CHECK(st.max_inflight == 1);
}

TEST_CASE("displaced argument returns home through a swap hop") {
  program p = parse_program(R"(
    module sub(qbit a) { H(a); }
    module main() {
      qbit q[3];
      sub(q[2]);
      CNOT(q[0], q[2]);
    }
  )");
  arch_config cfg;
  mapping_result mr = map_program(p, cfg);

  const module_profile& main = mr.main_profile();
  REQUIRE(main.calls.size() == 1);
  const transfer_set& ts = main.tsets[main.calls[0].tset];
  CHECK(ts.fwd[0].codes == "SBBBBB"); // q[0] sits in the way
  CHECK(ts.bwd[0].codes == "BBBBBS"); // and gets swapped back

  syscode code = expand_mapping(mr);
  replay_stats st = replay_syscode(code);
  CHECK(st.clean());
  CHECK(st.exec_time == main.internal_time);
  CHECK(st.depth == main.internal_cycle);

  CHECK(replay_worldlines(p, code) == flat_stream(flatten(p)));
}

TEST_CASE("memoized and rebuilt mappings agree byte for byte") {
  for (const program& p : {bench::gen_nest(2, 2, 3), bench::gen_adder(4)}) {
    arch_config on;
    on.memoize = true;
    arch_config off;
    off.memoize = false;

    mapping_result m_on = map_program(p, on);
    mapping_result m_off = map_program(p, off);
    CHECK(write_hcode(m_on) == write_hcode(m_off));
    CHECK(write_syscode(expand_mapping(m_on)) ==
          write_syscode(expand_mapping(m_off)));
  }
}

TEST_CASE("call-free programs reduce to the flat mapping offset by the strip") {
  program p = parse_program(R"(
    module main() {
      qbit q[5];
      H(q[0]);
      CNOT(q[0], q[4]);
      T(q[2]);
      CNOT(q[1], q[3]);
      CNOT(q[0], q[4]);
    }
  )");
  arch_config cfg;
  flat_map_result flat = map_flat(flatten(p), cfg, p);
  mapping_result mr = map_program(p, cfg);
  REQUIRE(mr.bus_rows == 1);

  CHECK(mr.main_profile().internal_time == flat.exec_time);
  CHECK(mr.main_profile().internal_cycle == flat.depth);

  syscode hier = expand_mapping(mr);
  std::vector<record> work;
  for (const record& r : hier.records)
    if (r.op != opcode::init && r.op != opcode::sync) work.push_back(r);

  REQUIRE(work.size() == flat.code.records.size());
  for (size_t i = 0; i < work.size(); ++i) {
    const record& h = work[i];
    const record& f = flat.code.records[i];
    INFO("record " << i);
    CHECK(h.start == f.start);
    CHECK(h.duration == f.duration);
    CHECK(h.op == f.op);
    CHECK(h.a.x == f.a.x);
    CHECK(h.b.x == f.b.x);
    CHECK(h.a.y == f.a.y + 1);
    CHECK(h.b.y == f.b.y + 1);
    CHECK(hier.tags.name(h.tag) == flat.code.tags.name(f.tag));
  }
}

TEST_CASE("repeated call sites settle into a fixed rhythm") {
  program p = bench::gen_repeat(4, 6, 3);
  arch_config cfg;
  mapping_result mr = map_program(p, cfg);

  const auto& calls = mr.main_profile().calls;
  REQUIRE(calls.size() == 6);
  for (const call_step& cs : calls) CHECK(cs.dx == calls[0].dx);

  uint64_t d1 = calls[1].delta - calls[0].delta;
  uint64_t d2 = calls[2].delta - calls[1].delta;
  for (size_t i = 3; i < calls.size(); ++i)
    CHECK(calls[i].delta - calls[i - 1].delta == d2);
  CHECK(d1 >= d2); // the first interval also absorbs the cold start

  // one built transfer set serves every repeat
  for (const call_step& cs : calls) CHECK(cs.tset == calls[0].tset);
  CHECK(mr.main_profile().tsets.size() == 1);
}

TEST_CASE("gates between repeated calls force a fresh transfer build") {
  program p = parse_program(R"(
    module sub(qbit a, qbit b) { CNOT(a, b); H(a); }
    module main() {
      qbit q[3];
      sub(q[0], q[1]);
      sub(q[0], q[1]);
      H(q[0]);
      sub(q[0], q[1]);
      sub(q[1], q[2]);
      sub(q[0], q[1]);
    }
  )");
  arch_config cfg;
  mapping_result mr = map_program(p, cfg);

  const auto& calls = mr.main_profile().calls;
  REQUIRE(calls.size() == 5);
  CHECK(calls[1].tset == calls[0].tset); // clean repeat shares the set
  CHECK(calls[2].tset != calls[1].tset); // the gate in between invalidates
  CHECK(calls[3].tset != calls[2].tset); // different arguments, own set
  CHECK(calls[4].tset == calls[2].tset); // unrelated call leaves the site alone

  syscode code = expand_mapping(mr);
  replay_stats st = replay_syscode(code);
  CHECK(st.clean());
  CHECK(st.exec_time == mr.main_profile().internal_time);
  CHECK(st.depth == mr.main_profile().internal_cycle);
  CHECK(replay_worldlines(p, code) == flat_stream(flatten(p)));
}

TEST_CASE("logical instruction stream survives the mapping") {
  auto displaced = parse_program(R"(
    module sub(qbit a) { H(a); }
    module main() {
      qbit q[3];
      sub(q[2]);
      CNOT(q[0], q[2]);
    }
  )");
  for (const program& p :
       {bench::gen_repeat(3, 4, 3), bench::gen_adder(2),
        bench::gen_nest(2, 2, 4), displaced}) {
    arch_config cfg;
    mapping_result mr = map_program(p, cfg);
    syscode code = expand_mapping(mr);
    CHECK(replay_worldlines(p, code) == flat_stream(flatten(p)));
  }
}

TEST_CASE("replay finds no timing violations across the suite") {
  arch_config base;
  arch_config heavy;
  heavy.swap_cycle_weight = 2;
  arch_config narrow;
  narrow.bus_bandwidth = 2;
  arch_config opt;
  opt.placement = placement_mode::optimized;

  for (const program& p : {bench::gen_adder(4), bench::gen_nest(2, 3, 4),
                           bench::gen_repeat(5, 20, 3), bench::gen_mesh(4, 3)}) {
    for (const arch_config& cfg : {base, heavy, narrow, opt}) {
      mapping_result mr = map_program(p, cfg);
      syscode code = expand_mapping(mr);
      replay_stats st = replay_syscode(code);
      INFO("violations: " << (st.violations.empty() ? "" : st.violations[0]));
      CHECK(st.clean());
      CHECK(st.exec_time == mr.main_profile().internal_time);
      CHECK(st.depth == mr.main_profile().internal_cycle);
      CHECK(st.max_inflight <= mr.bus_rows);
    }
  }
}

TEST_CASE("strip bandwidth caps concurrent transfers") {
  program p = parse_program(R"(
    module wide(qbit a, qbit b, qbit c) { H(b); }
    module main() {
      qbit q[3];
      wide(q[0], q[1], q[2]);
      wide(q[2], q[0], q[1]);
    }
  )");
  arch_config cfg;
  cfg.bus_bandwidth = 2;
  mapping_result mr = map_program(p, cfg);
  REQUIRE(mr.bus_rows == 2);

  replay_stats st = replay_syscode(expand_mapping(mr));
  CHECK(st.clean());
  CHECK(st.max_inflight <= 2);

  arch_config wide_cfg; // derived bandwidth: one lane per argument
  mapping_result mr3 = map_program(p, wide_cfg);
  CHECK(mr3.bus_rows == 3);
  CHECK(replay_syscode(expand_mapping(mr3)).clean());
}

TEST_CASE("hcode round-trips the mapping exactly") {
  for (const program& p : {bench::gen_adder(4), bench::gen_nest(2, 2, 3)}) {
    arch_config cfg;
    mapping_result mr = map_program(p, cfg);

    std::string h1 = write_hcode(mr);
    mapping_result back = read_hcode(h1);
    CHECK(write_hcode(back) == h1);
    CHECK(back.machine_cols == mr.machine_cols);
    CHECK(back.machine_rows == mr.machine_rows);
    CHECK(back.bus_rows == mr.bus_rows);

    const module_profile& a = mr.main_profile();
    const module_profile& b = back.main_profile();
    CHECK(a.internal_time == b.internal_time);
    CHECK(a.internal_cycle == b.internal_cycle);
    CHECK(a.op_counts == b.op_counts);
    CHECK(a.gate_counts == b.gate_counts);
    CHECK(a.hops_route == b.hops_route);
    CHECK(a.hops_transfer == b.hops_transfer);
    CHECK(a.cnot_instrs == b.cnot_instrs);
    CHECK(a.peak_cells == b.peak_cells);
    CHECK(a.expanded_records == b.expanded_records);

    CHECK(write_syscode(expand_mapping(back)) ==
          write_syscode(expand_mapping(mr)));
  }
}
