#include <catch2/catch_amalgamated.hpp>

#include "hqmap/arch/config.hpp"
#include "hqmap/arch/layout.hpp"
#include "hqmap/bench/generate.hpp"
#include "hqmap/qasm/parser.hpp"

using namespace hqmap;

TEST_CASE("config defaults and parsing") {
  arch_config def;
  CHECK(def.bus_bandwidth == 0);
  CHECK(def.swap_time == 30);
  CHECK(def.move_time == 10);
  CHECK(def.swap_cycle_weight == 1);
  CHECK(def.duration_of(gate_kind::h) == 1);
  CHECK(def.duration_of(gate_kind::rz) == 1);
  CHECK(def.duration_of(gate_kind::cnot) == 10);
  CHECK(def.duration_of(gate_kind::swap) == 30);
  CHECK(def.duration_of(gate_kind::measz) == 10);
  CHECK(def.placement == placement_mode::fcfs);
  CHECK(def.memoize);

  arch_config cfg = parse_arch_config(R"(
# machine sizing
bus_bandwidth = 3
swap_time = 40        # in ticks
move_time=5
swap_cycle_weight = 2
gate_time.CNOT = 12
gate_time.H = 2
placement_mode = optimized
memoize = off
)");
  CHECK(cfg.bus_bandwidth == 3);
  CHECK(cfg.swap_time == 40);
  CHECK(cfg.move_time == 5);
  CHECK(cfg.swap_cycle_weight == 2);
  CHECK(cfg.duration_of(gate_kind::cnot) == 12);
  CHECK(cfg.duration_of(gate_kind::h) == 2);
  CHECK(cfg.duration_of(gate_kind::x) == 1);
  CHECK(cfg.placement == placement_mode::optimized);
  CHECK_FALSE(cfg.memoize);

  CHECK(parse_arch_config("bus_bandwidth = auto").bus_bandwidth == 0);
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(parse_arch_config("swap_time"), parse_error);
  CHECK_THROWS_AS(parse_arch_config("swap_time ="), parse_error);
  CHECK_THROWS_AS(parse_arch_config("swap_time = -3"), parse_error);
  CHECK_THROWS_AS(parse_arch_config("swap_time = fast"), parse_error);
  CHECK_THROWS_AS(parse_arch_config("bus_bandwidth = 0"), parse_error);
  CHECK_THROWS_AS(parse_arch_config("no_such_key = 1"), parse_error);
  CHECK_THROWS_AS(parse_arch_config("gate_time.NOPE = 2"), parse_error);
  CHECK_THROWS_AS(parse_arch_config("placement_mode = best"), parse_error);
  CHECK_THROWS_AS(parse_arch_config("memoize = maybe"), parse_error);

  try {
    parse_arch_config("swap_time = 1\nwat = 2\n");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.where().line == 2);
  }
}

TEST_CASE("auto bandwidth follows the widest reachable module") {
  arch_config cfg; // bus_bandwidth auto
  program p = parse_program(R"(
module wide(qbit a, qbit b, qbit c, qbit d, qbit e) { H(a); H(b); H(c); H(d); H(e); }
module mid(qbit a, qbit b, qbit c) { qbit t[2]; wide(a, b, c, t[0], t[1]); }
module main() { qbit q[3]; mid(q[0], q[1], q[2]); }
)");
  CHECK(resolved_bus_bandwidth(cfg, p) == 5);

  program noreach = parse_program(R"(
module dead(qbit a, qbit b, qbit c, qbit d, qbit e, qbit f, qbit g, qbit h, qbit i) { H(a); }
module main() { qbit q; H(q); }
)");
  CHECK(resolved_bus_bandwidth(cfg, noreach) == 1);

  cfg.bus_bandwidth = 2;
  CHECK(resolved_bus_bandwidth(cfg, p) == 2);
}

TEST_CASE("region shapes stay square and parameter-fronted") {
  CHECK(region_shape_for(2, 3) == region_shape{3, 2}); // 5 qubits, one pad cell
  CHECK(region_shape_for(0, 0) == region_shape{0, 0});
  CHECK(region_shape_for(4, 0) == region_shape{4, 1});
  CHECK(region_shape_for(1, 0) == region_shape{1, 1});
  CHECK(region_shape_for(0, 5) == region_shape{3, 2});
  CHECK(region_shape_for(2, 0) == region_shape{2, 1});
  CHECK(region_shape_for(3, 13) == region_shape{4, 4});

  for (uint32_t p = 0; p <= 8; ++p)
    for (uint32_t l = 0; l <= 20; ++l) {
      region_shape s = region_shape_for(p, l);
      uint32_t n = p + l;
      if (n == 0) {
        CHECK(s.cells() == 0);
        continue;
      }
      CHECK(s.width >= p);               // all params fit on the bus-facing row
      CHECK(s.cells() >= n);             // everything fits
      CHECK(s.cells() - n < s.width);    // padding is less than one row
      CHECK(s.height == (n + s.width - 1) / s.width);
    }
}

TEST_CASE("region cells fill row-major from the bus-facing row") {
  region_shape s{3, 2};
  CHECK(region_cell(s, 5, 4, 0) == cell{5, 4});
  CHECK(region_cell(s, 5, 4, 2) == cell{7, 4});
  CHECK(region_cell(s, 5, 4, 3) == cell{5, 5});
  CHECK(region_cell(s, 5, 4, 5) == cell{7, 5});
}

TEST_CASE("passing distance descends, runs the strip, climbs") {
  const int32_t B = 2;
  // corner cells of two slots separated by the spacer column: 1 + gap + 1
  CHECK(passing_distance({2, B}, {4, B}, B) == 4);
  // deeper cells pay their altitude on both sides
  CHECK(passing_distance({2, B + 2}, {4, B + 1}, B) == 3 + 2 + 2);
  // each extra lane costs one hop down and one hop up
  CHECK(passing_distance({2, B}, {4, B}, B, 1) == 6);
  CHECK(passing_distance({2, B}, {4, B}, B, 3) == 10);
  // symmetric in its endpoints
  for (int32_t fx : {0, 3, 9})
    for (int32_t tx : {1, 7})
      for (int32_t fy : {B, B + 2})
        for (int32_t ty : {B, B + 3})
          CHECK(passing_distance({fx, fy}, {tx, ty}, B) ==
                passing_distance({tx, ty}, {fx, fy}, B));
}

TEST_CASE("slot stack reuses space in call order") {
  slot_stack st;
  region_slot a = st.allocate(3);
  CHECK(a.x0 == 0);
  region_slot b = st.allocate(2);
  CHECK(b.x0 == 4);
  CHECK(st.cursor() == 7);
  CHECK(st.depth() == 2);

  st.deallocate(b);
  CHECK(st.cursor() == 4);
  region_slot c = st.allocate(5);
  CHECK(c.x0 == 4); // reuses the freed span
  CHECK(st.high_water() == 10);

  // only the innermost live slot may be released
  CHECK_THROWS_AS(st.deallocate(a), std::logic_error);
  st.deallocate(c);
  st.deallocate(a);
  CHECK(st.depth() == 0);
  CHECK(st.cursor() == 0);
  CHECK(st.high_water() == 10);
}
