#include "lpsram/fault_engine.hpp"

#include "lpsram/errors.hpp"

namespace lpsram {

void on_write(CellState& c, const BehaviorSet& b, Bit v) {
  if (b.stuck_at) {
    c.stored = *b.stuck_at;
  } else if (b.transition_to && *b.transition_to == v && c.stored != v) {
    // impaired write of the vulnerable value: the cell keeps (or settles
    // at) the complement; mirroring the polarity mirrors this exactly
    c.stored = flip(v);
    c.corrupted_by = Mechanism::transition_fail;
  } else {
    c.stored = v;
    c.corrupted_by.reset();
  }
  c.just_written = v;
  c.res_stress_count = 0;
  c.post_lpm_pending = false;
}

ReadOutcome on_read(CellState& c, const BehaviorSet& b) {
  ReadOutcome out;
  if (b.stuck_at) {
    out.value = *b.stuck_at;
  } else if (b.post_lpm_read_flip && c.post_lpm_pending &&
             c.stored == *b.post_lpm_read_flip) {
    c.stored = flip(*b.post_lpm_read_flip);
    c.corrupted_by = Mechanism::post_lpm_fail;
    out.value = *c.stored;
  } else if (b.raw_flip && c.just_written == *b.raw_flip) {
    c.stored = flip(*b.raw_flip);
    c.corrupted_by = Mechanism::raw_fail;
    out.value = *c.stored;
  } else if (c.stored) {
    out.value = *c.stored;
  } else {
    out.value = Bit::zero;
    out.was_unknown = true;
  }
  c.just_written.reset();
  c.res_stress_count = 0;
  c.post_lpm_pending = false;
  return out;
}

void on_indirect_read(CellState& c, const BehaviorSet& b) {
  c.just_written.reset();
  if (b.res_flip && c.stored == b.res_flip->vulnerable) {
    if (++c.res_stress_count >= b.res_flip->stress_to_flip) {
      c.stored = flip(b.res_flip->vulnerable);
      c.res_stress_count = 0;
      c.corrupted_by = Mechanism::stress_flip;
    }
  }
}

void on_lpm_enter(MemoryArray& a) {
  if (a.mode() == PowerMode::lpm) throw sequencing_error("lpm: array already in LPM");
  a.set_mode(PowerMode::lpm);
  for (auto& c : a.cells()) c.just_written.reset();
}

void on_lpm_exit(MemoryArray& a) {
  if (a.mode() != PowerMode::lpm) throw sequencing_error("nm: array not in LPM");
  a.set_mode(PowerMode::nm);
  const auto& behaviors = a.all_behaviors();
  auto& cells = a.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const BehaviorSet& b = behaviors[i];
    CellState& c = cells[i];
    if (b.lpm_exit_flip && c.stored == *b.lpm_exit_flip) {
      c.stored = flip(*b.lpm_exit_flip);
      c.corrupted_by = Mechanism::post_lpm_fail;
    }
    if (b.post_lpm_read_flip && c.stored == *b.post_lpm_read_flip)
      c.post_lpm_pending = true;
  }
}

double iddq_current(const MemoryArray& a) {
  if (a.mode() == PowerMode::lpm) throw sequencing_error("iddq: measurement in LPM");
  double total = static_cast<double>(a.rows()) * a.cols() * a.profile().iddq_baseline;
  const auto& behaviors = a.all_behaviors();
  const auto& cells = a.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& leak = behaviors[i].iddq_leak;
    if (leak && cells[i].stored == leak->vulnerable) total += leak->delta;
  }
  return total;
}

double iddq_threshold(const MemoryArray& a) {
  return static_cast<double>(a.rows()) * a.cols() * a.profile().iddq_baseline +
         a.profile().iddq_threshold_margin;
}

}  // namespace lpsram
