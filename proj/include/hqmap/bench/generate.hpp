#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hqmap/qasm/ast.hpp"

// Synthetic workload generators. Everything here is deterministic: same
// arguments (and seed) give the same program, bit for bit, on any platform.
namespace hqmap::bench {

namespace detail {

inline qubit_ref scalar_ref(std::string name, int32_t slot) {
  qubit_ref q;
  q.name = std::move(name);
  q.slot = slot;
  return q;
}

inline qubit_ref array_ref(std::string name, uint32_t idx, int32_t slot) {
  qubit_ref q;
  q.name = std::move(name);
  q.index = idx;
  q.slot = slot;
  return q;
}

inline void g1(module_def& m, gate_kind g, qubit_ref q) {
  instr in;
  in.kind = instr_kind::gate1;
  in.gate = g;
  in.qubits.push_back(std::move(q));
  m.body.push_back(std::move(in));
}

inline void g2(module_def& m, gate_kind g, qubit_ref a, qubit_ref b) {
  instr in;
  in.kind = instr_kind::gate2;
  in.gate = g;
  in.qubits.push_back(std::move(a));
  in.qubits.push_back(std::move(b));
  m.body.push_back(std::move(in));
}

inline void call(module_def& m, std::string callee, int32_t callee_index,
                 std::vector<qubit_ref> args) {
  instr in;
  in.kind = instr_kind::call;
  in.callee = std::move(callee);
  in.callee_index = callee_index;
  in.qubits = std::move(args);
  m.body.push_back(std::move(in));
}

inline qubit_decl scalar_decl(std::string name) {
  qubit_decl d;
  d.name = std::move(name);
  return d;
}

inline qubit_decl array_decl(std::string name, uint32_t size) {
  qubit_decl d;
  d.name = std::move(name);
  d.size = size;
  return d;
}

// standard 7-T two-control decomposition, controls x,y onto target z
inline void ccx(module_def& m, const qubit_ref& x, const qubit_ref& y,
                const qubit_ref& z) {
  g1(m, gate_kind::h, z);
  g2(m, gate_kind::cnot, y, z);
  g1(m, gate_kind::tdag, z);
  g2(m, gate_kind::cnot, x, z);
  g1(m, gate_kind::t, z);
  g2(m, gate_kind::cnot, y, z);
  g1(m, gate_kind::tdag, z);
  g2(m, gate_kind::cnot, x, z);
  g1(m, gate_kind::t, y);
  g1(m, gate_kind::t, z);
  g2(m, gate_kind::cnot, x, y);
  g1(m, gate_kind::h, z);
  g1(m, gate_kind::t, x);
  g1(m, gate_kind::tdag, y);
  g2(m, gate_kind::cnot, x, y);
}

} // namespace detail

// One module of k gates, called n times from main. Instruction counts are
// k + n modular and k * n flattened, which makes the growth of each pipeline
// stage easy to predict in tests.
inline program gen_repeat(uint32_t k, uint32_t n, uint32_t qubits) {
  using namespace detail;
  program p;

  module_def sub;
  sub.name = "sub";
  for (uint32_t i = 0; i < qubits; ++i) sub.params.push_back("q" + std::to_string(i));
  for (uint32_t i = 0; i < k; ++i) {
    if (i % 2 == 0 || qubits < 2) {
      uint32_t s = i % qubits;
      g1(sub, gate_kind::h, scalar_ref(sub.params[s], static_cast<int32_t>(s)));
    } else {
      uint32_t s = i % (qubits - 1);
      g2(sub, gate_kind::cnot, scalar_ref(sub.params[s], static_cast<int32_t>(s)),
         scalar_ref(sub.params[s + 1], static_cast<int32_t>(s + 1)));
    }
  }
  p.modules.push_back(std::move(sub));

  module_def main;
  main.name = "main";
  main.locals.push_back(array_decl("q", qubits));
  for (uint32_t c = 0; c < n; ++c) {
    std::vector<qubit_ref> args;
    for (uint32_t i = 0; i < qubits; ++i)
      args.push_back(array_ref("q", i, static_cast<int32_t>(i)));
    call(main, "sub", 0, std::move(args));
  }
  p.modules.push_back(std::move(main));
  p.main_index = 1;
  return p;
}

// A fanout-ary call tree of the given depth. Level i holds k gates and
// fanout calls into level i+1; the flattened size is k * sum(fanout^i).
inline program gen_nest(uint32_t depth, uint32_t fanout, uint32_t k) {
  using namespace detail;
  program p;

  for (uint32_t lvl = 0; lvl <= depth; ++lvl) {
    module_def m;
    m.name = "lvl" + std::to_string(lvl);
    m.params = {"a", "b"};
    qubit_ref a = scalar_ref("a", 0), b = scalar_ref("b", 1);
    for (uint32_t i = 0; i < k; ++i) {
      switch (i % 3) {
        case 0: g1(m, gate_kind::h, a); break;
        case 1: g2(m, gate_kind::cnot, a, b); break;
        case 2: g1(m, gate_kind::x, b); break;
      }
    }
    if (lvl < depth)
      for (uint32_t f = 0; f < fanout; ++f)
        call(m, "lvl" + std::to_string(lvl + 1), static_cast<int32_t>(lvl + 1), {a, b});
    p.modules.push_back(std::move(m));
  }

  module_def main;
  main.name = "main";
  main.locals.push_back(array_decl("q", 2));
  call(main, "lvl0", 0, {array_ref("q", 0, 0), array_ref("q", 1, 1)});
  p.modules.push_back(std::move(main));
  p.main_index = static_cast<int32_t>(p.modules.size()) - 1;
  return p;
}

// Ripple-carry adder in the usual MAJ/UMA form. The carry chain touches
// a[i], b[i] pairs whose declarations sit a whole block apart, so a naive
// one-register layout pays more routing the wider the adder gets.
inline program gen_adder(uint32_t width) {
  using namespace detail;
  program p;

  module_def maj;
  maj.name = "maj";
  maj.params = {"x", "y", "z"};
  {
    qubit_ref x = scalar_ref("x", 0), y = scalar_ref("y", 1), z = scalar_ref("z", 2);
    g2(maj, gate_kind::cnot, z, y);
    g2(maj, gate_kind::cnot, z, x);
    ccx(maj, x, y, z);
  }
  p.modules.push_back(std::move(maj));

  module_def uma;
  uma.name = "uma";
  uma.params = {"x", "y", "z"};
  {
    qubit_ref x = scalar_ref("x", 0), y = scalar_ref("y", 1), z = scalar_ref("z", 2);
    ccx(uma, x, y, z);
    g2(uma, gate_kind::cnot, z, x);
    g2(uma, gate_kind::cnot, x, y);
  }
  p.modules.push_back(std::move(uma));

  module_def chain;
  chain.name = "chain";
  for (uint32_t i = 0; i < width; ++i) chain.params.push_back("a" + std::to_string(i));
  for (uint32_t i = 0; i < width; ++i) chain.params.push_back("b" + std::to_string(i));
  chain.params.push_back("c");
  auto pa = [&](uint32_t i) {
    return scalar_ref("a" + std::to_string(i), static_cast<int32_t>(i));
  };
  auto pb = [&](uint32_t i) {
    return scalar_ref("b" + std::to_string(i), static_cast<int32_t>(width + i));
  };
  qubit_ref pc = scalar_ref("c", static_cast<int32_t>(2 * width));
  call(chain, "maj", 0, {pc, pb(0), pa(0)});
  for (uint32_t i = 1; i < width; ++i) call(chain, "maj", 0, {pa(i - 1), pb(i), pa(i)});
  for (uint32_t i = width; i-- > 1;) call(chain, "uma", 1, {pa(i - 1), pb(i), pa(i)});
  call(chain, "uma", 1, {pc, pb(0), pa(0)});
  p.modules.push_back(std::move(chain));

  module_def main;
  main.name = "main";
  main.locals.push_back(array_decl("a", width));
  main.locals.push_back(array_decl("b", width));
  main.locals.push_back(scalar_decl("c"));
  std::vector<qubit_ref> args;
  for (uint32_t i = 0; i < width; ++i)
    args.push_back(array_ref("a", i, static_cast<int32_t>(i)));
  for (uint32_t i = 0; i < width; ++i)
    args.push_back(array_ref("b", i, static_cast<int32_t>(width + i)));
  args.push_back(scalar_ref("c", static_cast<int32_t>(2 * width)));
  call(main, "chain", 2, std::move(args));
  p.modules.push_back(std::move(main));
  p.main_index = 3;
  return p;
}

// Alternating brick-pattern entangling layers over a register of the given
// width, repeated depth times.
inline program gen_mesh(uint32_t width, uint32_t depth) {
  using namespace detail;
  program p;

  for (int which = 0; which < 2; ++which) {
    module_def m;
    m.name = which == 0 ? "layera" : "layerb";
    for (uint32_t i = 0; i < width; ++i) m.params.push_back("q" + std::to_string(i));
    auto ref = [&](uint32_t i) {
      return scalar_ref("q" + std::to_string(i), static_cast<int32_t>(i));
    };
    for (uint32_t i = 0; i < width; ++i)
      g1(m, which == 0 ? gate_kind::h : gate_kind::t, ref(i));
    for (uint32_t i = which == 0 ? 0 : 1; i + 1 < width; i += 2)
      g2(m, gate_kind::cnot, ref(i), ref(i + 1));
    p.modules.push_back(std::move(m));
  }

  module_def main;
  main.name = "main";
  main.locals.push_back(array_decl("q", width));
  for (uint32_t d = 0; d < depth; ++d) {
    std::vector<qubit_ref> args;
    for (uint32_t i = 0; i < width; ++i)
      args.push_back(array_ref("q", i, static_cast<int32_t>(i)));
    call(main, d % 2 == 0 ? "layera" : "layerb", d % 2 == 0 ? 0 : 1, std::move(args));
  }
  p.modules.push_back(std::move(main));
  p.main_index = 2;
  return p;
}

// Small random module for layout experiments: up to 2 params, 2..6 locals,
// 3 gates per qubit. Raw modulo on mt19937_64 keeps the stream identical
// across standard library implementations.
inline module_def gen_random_module(uint64_t seed) {
  using namespace detail;
  std::mt19937_64 rng(seed);
  auto pick = [&](uint64_t m) { return static_cast<uint32_t>(rng() % m); };

  module_def m;
  m.name = "rnd" + std::to_string(seed);
  uint32_t n_params = pick(3);
  uint32_t n_locals = 2 + pick(5);
  for (uint32_t i = 0; i < n_params; ++i) m.params.push_back("p" + std::to_string(i));
  for (uint32_t i = 0; i < n_locals; ++i)
    m.locals.push_back(scalar_decl("t" + std::to_string(i)));

  uint32_t nq = n_params + n_locals;
  auto ref = [&](uint32_t slot) {
    return slot < n_params ? scalar_ref(m.params[slot], static_cast<int32_t>(slot))
                           : scalar_ref("t" + std::to_string(slot - n_params),
                                        static_cast<int32_t>(slot));
  };
  static constexpr gate_kind one_q[] = {gate_kind::h, gate_kind::x, gate_kind::t,
                                        gate_kind::s};
  for (uint32_t g = 0; g < 3 * nq; ++g) {
    if (pick(2) == 0) {
      g1(m, one_q[pick(4)], ref(pick(nq)));
    } else {
      uint32_t a = pick(nq);
      uint32_t b = pick(nq - 1);
      if (b >= a) ++b;
      g2(m, gate_kind::cnot, ref(a), ref(b));
    }
  }
  return m;
}

} // namespace hqmap::bench
