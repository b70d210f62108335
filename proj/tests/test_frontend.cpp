#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <string>

#include "hqmap/qasm/flatten.hpp"
#include "hqmap/qasm/parser.hpp"
#include "hqmap/qasm/printer.hpp"
#include "hqmap/qasm/validate.hpp"

using namespace hqmap;

namespace {

// reference count: expand the call tree literally, no memoization
uint64_t naive_expanded(const program& p, int32_t mi) {
  uint64_t n = 0;
  for (const auto& in : p.modules[mi].body)
    n += in.kind == instr_kind::call ? naive_expanded(p, in.callee_index) : 1;
  return n;
}

const char* kSample = R"(
// two-qubit teleport-ish toy, exercises most of the surface syntax
module sub(qbit a, qbit b) {
  qbit t;
  CNOT(a, t);
  Rz(0.5, t);
  CNOT(t, b);
}

module main() {
  qbit q[2];
  H(q[0]);
  sub(q[0], q[1]);
  sub(q[1], q[0]);
  MeasZ(q[1]);
}
)";

} // namespace

TEST_CASE("parser builds the expected structure") {
  program p = parse_program(kSample);
  REQUIRE(p.modules.size() == 2);
  REQUIRE(p.main_index == 1);
  REQUIRE(p.main().name == "main");

  const module_def& sub = p.modules[0];
  CHECK(sub.param_count() == 2);
  CHECK(sub.local_count() == 1);
  CHECK(sub.qubit_count() == 3);
  REQUIRE(sub.body.size() == 3);
  CHECK(sub.body[0].kind == instr_kind::gate2);
  CHECK(sub.body[0].gate == gate_kind::cnot);
  CHECK(sub.body[0].qubits[0].slot == 0);
  CHECK(sub.body[0].qubits[1].slot == 2);
  CHECK(sub.body[1].gate == gate_kind::rz);
  CHECK(sub.body[1].angle == 0.5);
  CHECK(sub.qubit_display(0) == "a");
  CHECK(sub.qubit_display(2) == "t");

  const module_def& main = p.main();
  CHECK(main.param_count() == 0);
  CHECK(main.qubit_count() == 2);
  CHECK(main.qubit_display(1) == "q[1]");
  REQUIRE(main.body.size() == 4);
  CHECK(main.body[1].kind == instr_kind::call);
  CHECK(main.body[1].callee == "sub");
  CHECK(main.body[1].callee_index == 0);
  CHECK(main.body[2].qubits[0].slot == 1);
  CHECK(main.body[3].gate == gate_kind::measz);

  CHECK(validate(p).empty());
}

TEST_CASE("reprint round-trips structurally") {
  auto roundtrip = [](const char* src) {
    program p1 = parse_program(src);
    std::string printed = to_qasm(p1);
    program p2 = parse_program(printed);
    CHECK(p1 == p2);
    CHECK(to_qasm(p2) == printed);
  };
  roundtrip(kSample);
  roundtrip(R"(
module rot(qbit q) {
  Rz(3.141592653589793, q);
  Rz(1e-20, q);
  Rz(-2.5, q);
  Rz(2, q);
  Sdag(q);
  Tdag(q);
}
module main() {
  qbit w[3];
  rot(w[2]);
  SWAP(w[0], w[1]);
  CZ(w[1], w[2]);
  PrepZ(w[0]);
}
)");
}

TEST_CASE("integer angle literals are accepted") {
  program p = parse_program("module main() { qbit q; Rz(2, q); }");
  CHECK(p.main().body[0].angle == 2.0);
  CHECK(to_qasm(p).find("Rz(2.0, q)") != std::string::npos);
}

TEST_CASE("parse errors carry source locations") {
  try {
    parse_program("module main() {\n  qbit q;\n  H(p);\n}");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.where().line == 3);
    CHECK(e.where().col == 5);
    CHECK(e.message() == "unknown qubit 'p'");
  }

  try {
    parse_program("module main() {\n  qbit q[2];\n  H(q[2]);\n}");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.where().line == 3);
    CHECK(std::string(e.message()).find("out of bounds") != std::string::npos);
  }
}

TEST_CASE("parser rejects malformed programs") {
  CHECK_THROWS_AS(parse_program("module main() { qbit q; H(q) }"), parse_error);
  CHECK_THROWS_AS(parse_program("module sub(qbit a) { H(a); }"), parse_error); // no main
  CHECK_THROWS_AS(parse_program("module main() { qbit q; Rz(q); }"), parse_error);
  CHECK_THROWS_AS(parse_program("module main() { qbit q; CNOT(q, q); }"), parse_error);
  CHECK_THROWS_AS(parse_program("module main() { qbit q; qbit q; H(q); }"), parse_error);
  CHECK_THROWS_AS(parse_program("module main() { qbit q[0]; }"), parse_error);
  CHECK_THROWS_AS(parse_program("module main() { qbit q[2]; H(q); }"), parse_error);
  CHECK_THROWS_AS(parse_program("module main() { qbit q; H(q[0]); }"), parse_error);
  CHECK_THROWS_AS(parse_program("module main(qbit q) { H(q); }\nmodule main() { qbit r; H(r); }"),
                  parse_error);
  CHECK_THROWS_AS(parse_program("module H(qbit q) { X(q); }\nmodule main() { qbit q; H(q); }"),
                  parse_error);
  // calls must pass at least one qubit
  CHECK_THROWS_AS(parse_program("module sub(qbit a) { H(a); }\nmodule main() { qbit q; sub(); }"),
                  parse_error);
  // same qubit twice in one call
  CHECK_THROWS_AS(
      parse_program("module sub(qbit a, qbit b) { CNOT(a, b); }\n"
                    "module main() { qbit q; sub(q, q); }"),
      parse_error);
}

TEST_CASE("validate reports recursion and call shape problems") {
  // mutual recursion parses but must not validate
  program p = parse_program(R"(
module a(qbit q) { b(q); }
module b(qbit q) { a(q); }
module main() { qbit q; a(q); }
)");
  auto diags = validate(p);
  REQUIRE_FALSE(diags.empty());
  bool found = false;
  for (const auto& d : diags)
    if (d.message.find("recursive") != std::string::npos &&
        d.message.find("a") != std::string::npos &&
        d.message.find("b") != std::string::npos)
      found = true;
  CHECK(found);

  // unknown callee parses (it could be a forward reference) but fails validate
  program q = parse_program("module main() { qbit q; nosuch(q); }");
  auto d2 = validate(q);
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].message.find("nosuch") != std::string::npos);

  // arity mismatch is a validate-time error
  program r = parse_program(R"(
module sub(qbit a, qbit b) { CNOT(a, b); }
module main() { qbit q[3]; sub(q[0], q[1], q[2]); }
)");
  auto d3 = validate(r);
  REQUIRE(d3.size() == 1);
  CHECK(d3[0].message.find("expects 2 arguments, got 3") != std::string::npos);

  // programmatically built call with no qubits
  program z = parse_program("module sub(qbit a) { H(a); }\nmodule main() { qbit q; sub(q); }");
  z.modules[z.main_index].body[0].qubits.clear();
  CHECK_FALSE(validate(z).empty());
}

TEST_CASE("instruction counts match literal expansion") {
  // three-deep chain: 2 gates per level plus the call
  program chain = parse_program(R"(
module c(qbit q) { H(q); X(q); }
module b(qbit q) { H(q); X(q); c(q); }
module a(qbit q) { H(q); X(q); b(q); }
module main() { qbit q; a(q); }
)");
  instruction_counts cc = count_instructions(chain);
  CHECK(cc.modular == 9);
  CHECK(cc.flattened == 6);
  CHECK_FALSE(cc.saturated);
  CHECK(cc.flattened == naive_expanded(chain, chain.main_index));

  // K gates called N times: modular K+N, flattened K*N
  program kn = parse_program(R"(
module sub(qbit q) { H(q); X(q); H(q); }
module main() { qbit q; sub(q); sub(q); sub(q); sub(q); }
)");
  instruction_counts ck = count_instructions(kn);
  CHECK(ck.modular == 7);
  CHECK(ck.flattened == 12);
  CHECK(ck.flattened == naive_expanded(kn, kn.main_index));
}

TEST_CASE("counts saturate instead of overflowing") {
  // 70 doubling levels: 2^70 leaf gates, far past uint64_t
  std::string src;
  for (int i = 0; i < 70; ++i)
    src += "module m" + std::to_string(i) + "(qbit q) { m" + std::to_string(i + 1) +
           "(q); m" + std::to_string(i + 1) + "(q); }\n";
  src += "module m70(qbit q) { X(q); }\n";
  src += "module main() { qbit q; m0(q); }\n";
  program p = parse_program(src);
  instruction_counts c = count_instructions(p);
  CHECK(c.saturated);
  CHECK(c.modular == 2 * 70 + 1 + 1);
  CHECK_THROWS_AS(flatten(p), flatten_limit_error);
}

TEST_CASE("flatten expands calls in order with qualified names") {
  program p = parse_program(R"(
module sub(qbit a, qbit b) {
  qbit t;
  CNOT(a, t);
  CNOT(t, b);
}
module main() {
  qbit q[2];
  H(q[0]);
  sub(q[0], q[1]);
  sub(q[1], q[0]);
}
)");
  flat_program f = flatten(p);
  REQUIRE(f.qubits.size() == 4);
  CHECK(f.qubits[0] == "q[0]");
  CHECK(f.qubits[1] == "q[1]");
  CHECK(f.qubits[2] == "sub@1/t");
  CHECK(f.qubits[3] == "sub@2/t");

  REQUIRE(f.instrs.size() == 5);
  CHECK(f.instrs[0].gate == gate_kind::h);
  CHECK(f.instrs[0].q0 == 0);
  CHECK(f.instrs[1].gate == gate_kind::cnot);
  CHECK(f.instrs[1].q0 == 0);
  CHECK(f.instrs[1].q1 == 2);
  CHECK(f.instrs[2].q0 == 2);
  CHECK(f.instrs[2].q1 == 1);
  CHECK(f.instrs[3].q0 == 1);
  CHECK(f.instrs[3].q1 == 3);
  CHECK(f.instrs[4].q0 == 3);
  CHECK(f.instrs[4].q1 == 0);

  // provenance points at the defining module and instruction
  CHECK(f.instrs[0].src_module == p.main_index);
  CHECK(f.instrs[0].src_instr == 0);
  CHECK(f.instrs[1].src_module == 0);
  CHECK(f.instrs[1].src_instr == 0);

  // nested locals pick up the full call path
  program nested = parse_program(R"(
module inner(qbit x) { qbit u; CNOT(x, u); }
module outer(qbit y) { inner(y); }
module main() { qbit q; outer(q); }
)");
  flat_program fn = flatten(nested);
  REQUIRE(fn.qubits.size() == 2);
  CHECK(fn.qubits[1] == "outer@0/inner@0/u");

  CHECK_THROWS_AS(flatten(p, 3), flatten_limit_error);
  try {
    flatten(p, 3);
  } catch (const flatten_limit_error& e) {
    CHECK(e.flattened == 5);
    CHECK_FALSE(e.saturated);
  }
}
