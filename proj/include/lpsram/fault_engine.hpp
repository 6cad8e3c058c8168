#pragma once

#include "lpsram/array.hpp"

namespace lpsram {

struct ReadOutcome {
  Bit value = Bit::zero;
  bool was_unknown = false;  // stored had never resolved; value defaults to 0
};

// Cell-level event semantics. The simulation engine is responsible for
// only issuing direct accesses while the array is in NM.

// Stuck-at cells keep their stuck value; a transition fault holds the old
// value when asked to cross in its blocked direction; everything else
// stores v. The write event itself always happens: it arms read-after-write
// adjacency and resets stress/pending state.
void on_write(CellState& c, const BehaviorSet& b, Bit v);

// Priority: stuck-at, then post-LPM flip, then read-after-write flip, then
// the plain stored value. Any read breaks adjacency and stress accumulation.
ReadOutcome on_read(CellState& c, const BehaviorSet& b);

// Stress received when a row mate is read under the shared word line.
void on_indirect_read(CellState& c, const BehaviorSet& b);

void on_lpm_enter(MemoryArray& a);
void on_lpm_exit(MemoryArray& a);

// Aggregate quiescent current of the whole array, NM only.
double iddq_current(const MemoryArray& a);
double iddq_threshold(const MemoryArray& a);

}  // namespace lpsram
