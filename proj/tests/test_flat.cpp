#include <catch2/catch_amalgamated.hpp>

#include "hqmap/bench/generate.hpp"
#include "hqmap/map/flat_mapper.hpp"
#include "hqmap/qasm/flatten.hpp"
#include "hqmap/qasm/parser.hpp"
#include "hqmap/report/oracle.hpp"

using namespace hqmap;

TEST_CASE("syscode text round-trips") {
  syscode code;
  code.meta_set("mode", "flat");
  code.meta_set("bus_bandwidth", "2");
  record r1{0, 10, opcode::cnot, {0, 0}, {1, 0}, code.tags.intern("g:main#0")};
  record r2{10, 0, opcode::init, {3, 2}, {3, 2}, code.tags.intern("in:sub")};
  record r3{10, 30, opcode::swap, {1, 0}, {1, 1}, code.tags.intern("r:main#1")};
  code.records = {r1, r2, r3};

  std::string text = write_syscode(code);
  CHECK(text.substr(0, 19) == "#hqmap-syscode v1\n#");

  syscode back = read_syscode(text);
  CHECK(back.meta_get("mode") == "flat");
  CHECK(back.meta_get("bus_bandwidth") == "2");
  CHECK(back.meta_get("nope").empty());
  REQUIRE(back.records.size() == 3);
  CHECK(back.records[0] == r1);
  CHECK(back.records[1] == r2);
  CHECK(back.records[2] == r3);
  CHECK(back.tags.name(back.records[2].tag) == "r:main#1");
  CHECK(write_syscode(back) == text);
}

TEST_CASE("syscode reader rejects malformed input") {
  CHECK_THROWS_AS(read_syscode("0 1 H 0 0 t\n"), parse_error); // no header
  const std::string h = "#hqmap-syscode v1\n";
  CHECK_THROWS_AS(read_syscode(h + "0 1 WAT 0 0 t\n"), parse_error);
  CHECK_THROWS_AS(read_syscode(h + "0 1 H 0 0\n"), parse_error);        // missing tag
  CHECK_THROWS_AS(read_syscode(h + "0 1 CNOT 0 0 1 t\n"), parse_error); // 7 fields
  CHECK_THROWS_AS(read_syscode(h + "0 1 CNOT 2 3 2 3 t\n"), parse_error);
  CHECK_THROWS_AS(read_syscode(h + "x 1 H 0 0 t\n"), parse_error);
  CHECK_THROWS_AS(read_syscode(h + "#meta solo\n"), parse_error);
  CHECK_THROWS_AS(read_syscode(h + "#wat 1\n"), parse_error);
  CHECK_NOTHROW(read_syscode(h));
}

TEST_CASE("flat mapper schedules a two-gate program as traced by hand") {
  program p = parse_program(R"(
module main() {
  qbit q[4];
  CNOT(q[0], q[1]);
  CNOT(q[0], q[3]);
}
)");
  arch_config cfg;
  flat_map_result res = map_flat(flatten(p), cfg, p);

  CHECK(res.grid == region_shape{2, 2});
  REQUIRE(res.code.records.size() == 3);

  // gate on the neighbouring pair fires immediately
  CHECK(res.code.records[0] ==
        record{0, 10, opcode::cnot, {0, 0}, {1, 0}, res.code.records[0].tag});
  CHECK(res.code.tags.name(res.code.records[0].tag) == "g:main#0");

  // diagonal partner: one swap brings q0 next to q3
  CHECK(res.code.records[1] ==
        record{10, 30, opcode::swap, {0, 0}, {1, 0}, res.code.records[1].tag});
  CHECK(res.code.tags.name(res.code.records[1].tag) == "r:main#1");
  CHECK(res.code.records[2] ==
        record{40, 10, opcode::cnot, {1, 0}, {1, 1}, res.code.records[2].tag});
  CHECK(res.code.tags.name(res.code.records[2].tag) == "g:main#1");

  CHECK(res.exec_time == 50);
  CHECK(res.depth == 3);
}

TEST_CASE("flat mapper moves into vacancies at region speed") {
  // three qubits on a 2x2 grid leave one vacancy
  program p = parse_program(R"(
module main() {
  qbit q[3];
  CNOT(q[2], q[1]);
}
)");
  arch_config cfg;
  flat_map_result res = map_flat(flatten(p), cfg, p);
  REQUIRE(res.code.records.size() == 2);
  const record& mv = res.code.records[0];
  CHECK(mv.op == opcode::move);
  CHECK(mv.a == cell{0, 1});
  CHECK(mv.b == cell{1, 1});
  CHECK(mv.duration == cfg.swap_time); // no bus on the flat machine
  CHECK(res.code.records[1].start == 30);
  CHECK(res.depth == 2);
}

TEST_CASE("oracle agrees with the mapper on clean code") {
  for (auto make : {bench::gen_adder(4), bench::gen_mesh(5, 4), bench::gen_repeat(9, 6, 3)}) {
    arch_config cfg;
    flat_map_result res = map_flat(flatten(make), cfg, make);
    replay_stats rs = replay_syscode(res.code);
    for (const auto& v : rs.violations) UNSCOPED_INFO(v);
    CHECK(rs.clean());
    CHECK(rs.exec_time == res.exec_time);
    CHECK(rs.depth == res.depth);
    CHECK(rs.max_inflight == 0); // no bus rows on the flat machine
  }
}

TEST_CASE("oracle flags timing, adjacency, and arity violations") {
  const std::string h = "#hqmap-syscode v1\n";
  // cell (0,0) is busy until 10 but reused at 5
  replay_stats rs = replay_syscode(read_syscode(h +
      "0 10 H 0 0 a\n"
      "5 10 H 0 0 a\n"));
  CHECK(rs.violation_count == 1);
  CHECK(rs.violations[0].find("busy until 10") != std::string::npos);

  rs = replay_syscode(read_syscode(h + "0 10 CNOT 0 0 2 0 a\n"));
  CHECK(rs.violation_count == 1);
  CHECK(rs.violations[0].find("not adjacent") != std::string::npos);

  rs = replay_syscode(read_syscode(h + "0 0 INIT 0 0 1 0 a\n"));
  CHECK(rs.violation_count == 1);

  rs = replay_syscode(read_syscode(h + "0 10 CNOT 0 0 a\n"));
  CHECK(rs.violation_count == 1);

  // the second operand's clock counts too
  rs = replay_syscode(read_syscode(h +
      "0 10 H 1 0 a\n"
      "5 10 CNOT 0 0 1 0 a\n"));
  CHECK(rs.violation_count == 1);
  CHECK(rs.violations[0].find("(1,0)") != std::string::npos);
}

TEST_CASE("oracle replay follows the opcode clock rules") {
  const std::string h = "#hqmap-syscode v1\n#meta swap_cycle_weight 2\n";
  // H twice then SWAP: levels 2 and 0 join at max+weight = 4
  replay_stats rs = replay_syscode(read_syscode(h +
      "0 1 H 0 0 a\n"
      "1 1 H 0 0 a\n"
      "2 30 SWAP 0 0 1 0 a\n"));
  CHECK(rs.clean());
  CHECK(rs.depth == 4);
  CHECK(rs.exec_time == 32);

  // INIT resets a stale clock; SYNC joins levels without advancing them
  rs = replay_syscode(read_syscode(h +
      "0 1 H 0 0 a\n"
      "1 1 H 0 0 a\n"
      "2 0 INIT 1 0 b\n"
      "2 0 SYNC 0 0 1 0 c\n"));
  CHECK(rs.clean());
  CHECK(rs.depth == 2);

  // MOVE carries level from the source only
  rs = replay_syscode(read_syscode(h +
      "0 1 H 0 0 a\n"
      "1 10 MOVE 0 0 1 0 t\n"));
  CHECK(rs.clean());
  CHECK(rs.depth == 3); // 1 + weight 2
  CHECK(rs.moves_region == 1);
  CHECK(rs.moves_bus == 0);
}

TEST_CASE("oracle counts overlapping bus transfers") {
  const std::string h = "#hqmap-syscode v1\n#meta bus_bandwidth 2\n";
  // transfer A: down, along, up over [0,30); transfer B overlaps it
  std::string body =
      "0 10 MOVE 0 2 0 1 pf:m#0:0\n"
      "10 10 MOVE 0 1 1 1 pf:m#0:0\n"
      "20 10 MOVE 1 1 1 2 pf:m#0:0\n"
      "15 10 MOVE 4 2 4 1 pf:m#0:1\n"
      "25 10 MOVE 4 1 3 1 pf:m#0:1\n"
      "35 10 MOVE 3 1 3 2 pf:m#0:1\n";
  replay_stats rs = replay_syscode(read_syscode(h + body));
  CHECK(rs.clean());
  CHECK(rs.max_inflight == 2);
  CHECK(rs.moves_bus == 6);

  // same tag again later, discontinuous path: separate episode, no overlap
  body +=
      "100 10 MOVE 8 2 8 1 pf:m#0:0\n"
      "110 10 MOVE 8 1 8 2 pf:m#0:0\n";
  rs = replay_syscode(read_syscode(h + body));
  CHECK(rs.max_inflight == 2);

  // back-to-back on one lane: end meets start, never three in flight
  body +=
      "30 10 MOVE 1 2 1 1 pf:m#1:0\n"
      "40 10 MOVE 1 1 0 1 pf:m#1:0\n";
  rs = replay_syscode(read_syscode(h + body));
  CHECK(rs.max_inflight == 2);

  // region-only moves never count as bus traffic
  replay_stats quiet = replay_syscode(read_syscode(h + "0 10 MOVE 0 2 0 3 r:x#0\n"));
  CHECK(quiet.max_inflight == 0);
  CHECK(quiet.moves_region == 1);
}
