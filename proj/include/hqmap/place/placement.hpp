#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "hqmap/arch/layout.hpp"
#include "hqmap/qasm/ast.hpp"

namespace hqmap {

// Pairwise interaction weights between the qubits of one module. Two-qubit
// gates couple their operands; a call couples every pair of its arguments,
// since the callee may touch any of them together.
struct interaction_graph {
  uint32_t n = 0;
  std::vector<uint64_t> w; // n*n, symmetric, zero diagonal

  explicit interaction_graph(uint32_t qubits) : n(qubits), w(size_t(qubits) * qubits, 0) {}

  uint64_t weight(uint32_t u, uint32_t v) const { return w[size_t(u) * n + v]; }

  void add(uint32_t u, uint32_t v, uint64_t dw = 1) {
    if (u == v) return;
    w[size_t(u) * n + v] += dw;
    w[size_t(v) * n + u] += dw;
  }
};

inline interaction_graph build_interaction_graph(const module_def& m) {
  interaction_graph g(m.qubit_count());
  for (const auto& in : m.body) {
    if (in.kind == instr_kind::gate2) {
      g.add(static_cast<uint32_t>(in.qubits[0].slot),
            static_cast<uint32_t>(in.qubits[1].slot));
    } else if (in.kind == instr_kind::call) {
      for (size_t i = 0; i < in.qubits.size(); ++i)
        for (size_t j = i + 1; j < in.qubits.size(); ++j)
          g.add(static_cast<uint32_t>(in.qubits[i].slot),
                static_cast<uint32_t>(in.qubits[j].slot));
    }
  }
  return g;
}

// slot -> region cell index; parameters always land on cell indices [0, p)
// so they keep facing the bus, locals fill [p, n)
using placement = std::vector<uint32_t>;

inline placement fcfs_placement(uint32_t n_qubits) {
  placement p(n_qubits);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline int64_t placement_cost(const interaction_graph& g, region_shape shape,
                              const placement& pl) {
  int64_t c = 0;
  for (uint32_t u = 0; u < g.n; ++u)
    for (uint32_t v = u + 1; v < g.n; ++v)
      if (uint64_t wt = g.weight(u, v))
        c += static_cast<int64_t>(wt) *
             manhattan(region_cell(shape, 0, 0, pl[u]), region_cell(shape, 0, 0, pl[v]));
  return c;
}

namespace detail {

// Greedy descent over class-preserving transpositions and three-cycles:
// apply the single move with the best strict improvement, repeat. Pairs are
// tried before rotations and ties break toward the smallest slot tuple, so
// the result is stable across runs. Rotations rescue the common local
// minimum where every single swap is break-even but cycling three slots
// pays off.
inline void descend_placement(const interaction_graph& g, region_shape shape,
                              uint32_t n_params, uint32_t budget, placement& pl) {
  auto same_class = [&](uint32_t a, uint32_t b) {
    return (a < n_params) == (b < n_params);
  };

  for (uint32_t step = 0; step < budget; ++step) {
    int64_t base = placement_cost(g, shape, pl);
    int64_t best_delta = 0;
    placement best;
    auto consider = [&] {
      int64_t delta = placement_cost(g, shape, pl) - base;
      if (delta < best_delta) {
        best_delta = delta;
        best = pl;
      }
    };
    for (uint32_t i = 0; i < g.n; ++i)
      for (uint32_t j = i + 1; j < g.n; ++j) {
        if (!same_class(i, j)) continue;
        std::swap(pl[i], pl[j]);
        consider();
        std::swap(pl[i], pl[j]);
      }
    for (uint32_t i = 0; i < g.n; ++i)
      for (uint32_t j = i + 1; j < g.n; ++j)
        for (uint32_t k = j + 1; k < g.n; ++k) {
          if (!same_class(i, j) || !same_class(j, k)) continue;
          uint32_t pi = pl[i], pj = pl[j], pk = pl[k];
          pl[i] = pj; pl[j] = pk; pl[k] = pi;
          consider();
          pl[i] = pk; pl[j] = pi; pl[k] = pj;
          consider();
          pl[i] = pi; pl[j] = pj; pl[k] = pk;
        }
    if (best_delta >= 0) break;
    pl = std::move(best);
  }
}

} // namespace detail

// Local search from the first-fit order plus a few fixed shuffled starts;
// the cheapest finish wins, earliest start breaking ties. Every start uses
// its own pinned seed, so the result is a pure function of the graph.
inline placement optimize_placement(const interaction_graph& g, region_shape shape,
                                    uint32_t n_params, uint32_t budget = 1000) {
  placement pl = fcfs_placement(g.n);
  if (g.n < 2) return pl;

  detail::descend_placement(g, shape, n_params, budget, pl);
  int64_t best_cost = placement_cost(g, shape, pl);

  for (uint64_t start = 1; start <= 3; ++start) {
    placement cand = fcfs_placement(g.n);
    std::mt19937_64 rng(start);
    std::shuffle(cand.begin(), cand.begin() + n_params, rng);
    std::shuffle(cand.begin() + n_params, cand.end(), rng);
    detail::descend_placement(g, shape, n_params, budget, cand);
    int64_t c = placement_cost(g, shape, cand);
    if (c < best_cost) {
      best_cost = c;
      pl = std::move(cand);
    }
  }
  return pl;
}

struct instance_too_large : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exhaustive search over all class-preserving placements. Factorial in both
// halves, so it refuses anything past 8 parameters or 8 locals.
inline placement brute_force_optimal(const interaction_graph& g, region_shape shape,
                                     uint32_t n_params) {
  uint32_t n_locals = g.n - n_params;
  if (n_params > 8 || n_locals > 8)
    throw instance_too_large("brute-force placement limited to 8 params and 8 locals");

  std::vector<uint32_t> pperm(n_params), lperm(n_locals);
  std::iota(pperm.begin(), pperm.end(), 0);
  std::iota(lperm.begin(), lperm.end(), n_params);

  placement best = fcfs_placement(g.n);
  int64_t best_cost = placement_cost(g, shape, best);

  placement pl(g.n);
  do {
    std::copy(pperm.begin(), pperm.end(), pl.begin());
    auto lstart = lperm;
    do {
      std::copy(lstart.begin(), lstart.end(), pl.begin() + n_params);
      int64_t c = placement_cost(g, shape, pl);
      if (c < best_cost) { // strict: keeps the lexicographically first optimum
        best_cost = c;
        best = pl;
      }
    } while (std::next_permutation(lstart.begin(), lstart.end()));
  } while (std::next_permutation(pperm.begin(), pperm.end()));
  return best;
}

} // namespace hqmap
