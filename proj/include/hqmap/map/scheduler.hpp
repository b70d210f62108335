#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "hqmap/arch/config.hpp"
#include "hqmap/arch/geometry.hpp"
#include "hqmap/code/record.hpp"

namespace hqmap {

// Per-cell truth: who sits here, when the cell is next free, and the logical
// cycle its occupant has reached. Vacant cells keep their last time/level as
// stale history; anything reusing the cell must schedule after it.
struct cell_state {
  int32_t occupant = -1;
  uint64_t time = 0;
  uint64_t level = 0;
};

// Dense grid of cell states, grown on demand. Frames only ever use
// non-negative coordinates.
class cell_field {
public:
  cell_state& at(cell c) {
    assert(c.x >= 0 && c.y >= 0);
    if (static_cast<size_t>(c.y) >= rows_.size()) rows_.resize(c.y + 1);
    auto& row = rows_[c.y];
    if (static_cast<size_t>(c.x) >= row.size()) row.resize(c.x + 1);
    return row[c.x];
  }

  const cell_state& at(cell c) const {
    static const cell_state untouched{};
    if (c.y < 0 || static_cast<size_t>(c.y) >= rows_.size()) return untouched;
    const auto& row = rows_[c.y];
    if (c.x < 0 || static_cast<size_t>(c.x) >= row.size()) return untouched;
    return row[c.x];
  }

  // at() may grow and relocate storage, so two live references need both
  // cells materialized first
  std::pair<cell_state&, cell_state&> at2(cell a, cell b) {
    at(a);
    at(b);
    return {at(a), at(b)};
  }

private:
  std::vector<std::vector<cell_state>> rows_;
};

// Gate and routing primitives shared by the one-register baseline and the
// hierarchical mapper. The caller owns qubit positions; the scheduler owns
// the record stream and the cell clocks.
class gate_scheduler {
public:
  gate_scheduler(cell_field& field, const arch_config& cfg, int32_t bus_rows,
                 std::vector<record>& out, std::vector<cell>& pos)
      : field_(field), cfg_(cfg), bus_rows_(bus_rows), out_(out), pos_(pos) {}

  uint64_t max_level() const { return max_level_; }

  void schedule_1q(uint32_t q, gate_kind g, uint32_t tag) {
    cell c = pos_[q];
    cell_state& st = field_.at(c);
    emit(st.time, cfg_.duration_of(g), to_opcode(g), c, c, tag);
    st.time += cfg_.duration_of(g);
    bump(st, st.level + 1);
  }

  void schedule_2q(uint32_t q0, uint32_t q1, gate_kind g, uint32_t gate_tag,
                   uint32_t route_tag) {
    route_to_adjacent(q0, q1, route_tag);
    cell ca = pos_[q0], cb = pos_[q1];
    auto [sa, sb] = field_.at2(ca, cb);
    uint64_t start = std::max(sa.time, sb.time);
    uint64_t dur = cfg_.duration_of(g);
    emit(start, dur, to_opcode(g), ca, cb, gate_tag);
    sa.time = sb.time = start + dur;
    uint64_t lv = std::max(sa.level, sb.level) +
                  (g == gate_kind::swap ? cfg_.swap_cycle_weight : 1);
    bump(sa, lv);
    bump(sb, lv);
  }

  // Walks the two qubits toward each other until they are neighbours, one
  // alternating step at a time: the x gap closes first, then the y gap. The
  // two chains touch disjoint cells, so their hops overlap in time.
  // Displaced qubits stay displaced.
  void route_to_adjacent(uint32_t q, uint32_t target, uint32_t tag) {
    uint32_t mover = q, other = target;
    while (manhattan(pos_[mover], pos_[other]) > 1) {
      cell from = pos_[mover], to = pos_[other];
      cell next = from;
      if (from.x != to.x) {
        next.x += from.x < to.x ? 1 : -1;
      } else {
        next.y += from.y < to.y ? 1 : -1;
      }
      hop(mover, next, tag);
      std::swap(mover, other);
    }
  }

  // One swap-chain step: SWAP with an occupant, MOVE into vacancy.
  void hop(uint32_t q, cell to, uint32_t tag) {
    cell from = pos_[q];
    assert(adjacent(from, to));
    auto [sf, st] = field_.at2(from, to);
    assert(sf.occupant == static_cast<int32_t>(q));

    uint64_t start = std::max(sf.time, st.time);
    if (st.occupant >= 0) {
      emit(start, cfg_.swap_time, opcode::swap, from, to, tag);
      sf.time = st.time = start + cfg_.swap_time;
      uint64_t lv = std::max(sf.level, st.level) + cfg_.swap_cycle_weight;
      bump(sf, lv);
      bump(st, lv);
      std::swap(sf.occupant, st.occupant);
      pos_[st.occupant] = to;
      pos_[sf.occupant] = from;
    } else {
      uint64_t dur = on_bus(from) || on_bus(to) ? cfg_.move_time : cfg_.swap_time;
      emit(start, dur, opcode::move, from, to, tag);
      sf.time = st.time = start + dur;
      bump(st, sf.level + cfg_.swap_cycle_weight); // vacancies carry no cycle
      st.occupant = q;
      sf.occupant = -1;
      pos_[q] = to;
    }
  }

  void emit(uint64_t start, uint64_t dur, opcode op, cell a, cell b, uint32_t tag) {
    out_.push_back({start, dur, op, a, b, tag});
  }

private:
  bool on_bus(cell c) const { return c.y < bus_rows_; }

  void bump(cell_state& st, uint64_t level) {
    st.level = level;
    if (level > max_level_) max_level_ = level;
  }

  cell_field& field_;
  const arch_config& cfg_;
  int32_t bus_rows_;
  std::vector<record>& out_;
  std::vector<cell>& pos_;
  uint64_t max_level_ = 0;
};

} // namespace hqmap
