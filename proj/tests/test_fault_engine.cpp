#include <random>

#include "doctest.h"
#include "lpsram/errors.hpp"
#include "lpsram/fault_engine.hpp"

using namespace lpsram;

namespace {

BehaviorSet stuck(Bit b) {
  BehaviorSet s;
  s.stuck_at = b;
  return s;
}

BehaviorSet tf(Bit to) {
  BehaviorSet s;
  s.transition_to = to;
  return s;
}

BehaviorSet raw(Bit vul) {
  BehaviorSet s;
  s.raw_flip = vul;
  return s;
}

}  // namespace

TEST_CASE("writes") {
  const BehaviorSet none;
  CellState c;

  SUBCASE("fault-free write stores the value and arms adjacency") {
    c.stored = Bit::one;
    on_write(c, none, Bit::zero);
    CHECK(c.stored == Bit::zero);
    CHECK(c.just_written == Bit::zero);
  }
  SUBCASE("stuck cell ignores the data") {
    on_write(c, stuck(Bit::one), Bit::zero);
    CHECK(c.stored == Bit::one);
    CHECK(c.just_written == Bit::zero);  // the operation itself happened
  }
  SUBCASE("blocked transition keeps the old level") {
    c.stored = Bit::zero;
    on_write(c, tf(Bit::one), Bit::one);
    CHECK(c.stored == Bit::zero);
  }
  SUBCASE("transition fault lets same-value writes through") {
    c.stored = Bit::one;
    on_write(c, tf(Bit::one), Bit::one);
    CHECK(c.stored == Bit::one);
    on_write(c, tf(Bit::one), Bit::zero);
    CHECK(c.stored == Bit::zero);
  }
  SUBCASE("impaired write from the unresolved state settles at the complement") {
    on_write(c, tf(Bit::one), Bit::one);
    CHECK(c.stored == Bit::zero);
    CHECK(c.corrupted_by == Mechanism::transition_fail);
  }
  SUBCASE("write resets stress and pending state") {
    c.res_stress_count = 17;
    c.post_lpm_pending = true;
    on_write(c, none, Bit::one);
    CHECK(c.res_stress_count == 0);
    CHECK_FALSE(c.post_lpm_pending);
  }
}

TEST_CASE("reads") {
  const BehaviorSet none;
  CellState c;

  SUBCASE("fault-free read returns the stored value") {
    c.stored = Bit::zero;
    CHECK(on_read(c, none).value == Bit::zero);
    CHECK_FALSE(on_read(c, none).was_unknown);
  }
  SUBCASE("unresolved cell reads as 0 and reports it") {
    const auto out = on_read(c, none);
    CHECK(out.value == Bit::zero);
    CHECK(out.was_unknown);
  }
  SUBCASE("read-after-write flips when adjacent") {
    c.stored = Bit::zero;
    c.just_written = Bit::zero;
    const auto out = on_read(c, raw(Bit::zero));
    CHECK(out.value == Bit::one);
    CHECK(c.stored == Bit::one);
    CHECK(c.corrupted_by == Mechanism::raw_fail);
  }
  SUBCASE("no adjacency, no flip") {
    c.stored = Bit::zero;
    c.just_written.reset();
    CHECK(on_read(c, raw(Bit::zero)).value == Bit::zero);
    CHECK(c.stored == Bit::zero);
  }
  SUBCASE("post-LPM read flip") {
    BehaviorSet b;
    b.post_lpm_read_flip = Bit::zero;
    c.stored = Bit::zero;
    c.post_lpm_pending = true;
    const auto out = on_read(c, b);
    CHECK(out.value == Bit::one);
    CHECK(c.stored == Bit::one);
    CHECK_FALSE(c.post_lpm_pending);
    // a second read sees the settled wrong value, no second flip
    CHECK(on_read(c, b).value == Bit::one);
  }
  SUBCASE("stuck value wins over everything") {
    BehaviorSet b = stuck(Bit::one);
    c.stored = Bit::zero;
    c.just_written = Bit::zero;
    CHECK(on_read(c, b).value == Bit::one);
  }
  SUBCASE("read clears adjacency, stress and pending") {
    c.stored = Bit::one;
    c.just_written = Bit::one;
    c.res_stress_count = 3;
    c.post_lpm_pending = true;
    on_read(c, none);
    CHECK_FALSE(c.just_written.has_value());
    CHECK(c.res_stress_count == 0);
    CHECK_FALSE(c.post_lpm_pending);
  }
}

TEST_CASE("indirect reads accumulate stress and break adjacency") {
  BehaviorSet b;
  b.res_flip = ResFlipBehavior{Bit::zero, 64};
  CellState c;
  c.stored = Bit::zero;

  SUBCASE("63 events stay put") {
    for (int i = 0; i < 63; ++i) on_indirect_read(c, b);
    CHECK(c.stored == Bit::zero);
    CHECK(c.res_stress_count == 63);
  }
  SUBCASE("the 64th event flips and resets the counter") {
    for (int i = 0; i < 64; ++i) on_indirect_read(c, b);
    CHECK(c.stored == Bit::one);
    CHECK(c.res_stress_count == 0);
    CHECK(c.corrupted_by == Mechanism::stress_flip);
  }
  SUBCASE("holding the safe value does not accumulate") {
    c.stored = Bit::one;
    for (int i = 0; i < 100; ++i) on_indirect_read(c, b);
    CHECK(c.stored == Bit::one);
    CHECK(c.res_stress_count == 0);
  }
  SUBCASE("a direct access restarts the accumulation") {
    for (int i = 0; i < 63; ++i) on_indirect_read(c, b);
    on_read(c, b);
    CHECK(c.res_stress_count == 0);
    for (int i = 0; i < 63; ++i) on_indirect_read(c, b);
    CHECK(c.stored == Bit::zero);
  }
}

// Enumerates every breaker event between write(p) and read: each one must
// suppress the read-after-write flip; only the bare adjacent pair flips.
TEST_CASE("read-after-write needs strict adjacency") {
  enum class Between { nothing, indirect, lpm_dwell, other_write };
  for (const Between between :
       {Between::nothing, Between::indirect, Between::lpm_dwell, Between::other_write}) {
    MemoryArray a(1, 2, {});
    BehaviorSet b = raw(Bit::zero);
    a.inject({0, 0}, b);
    on_write(a.cell({0, 0}), b, Bit::zero);
    switch (between) {
      case Between::nothing:
        break;
      case Between::indirect:
        on_indirect_read(a.cell({0, 0}), b);
        break;
      case Between::lpm_dwell:
        on_lpm_enter(a);
        on_lpm_exit(a);
        break;
      case Between::other_write:
        // a write elsewhere in the row does not touch the cell
        on_write(a.cell({0, 1}), a.behaviors({0, 1}), Bit::one);
        break;
    }
    const Bit got = on_read(a.cell({0, 0}), b).value;
    const bool flipped = got == Bit::one;
    CHECK(flipped == (between == Between::nothing || between == Between::other_write));
  }
}

TEST_CASE("LPM transitions") {
  MemoryArray a(2, 2, {});
  BehaviorSet b;
  b.lpm_exit_flip = Bit::zero;
  a.inject({0, 1}, b);

  SUBCASE("mode sequencing is enforced") {
    CHECK_THROWS_AS(on_lpm_exit(a), sequencing_error);
    on_lpm_enter(a);
    CHECK(a.mode() == PowerMode::lpm);
    CHECK_THROWS_AS(on_lpm_enter(a), sequencing_error);
    on_lpm_exit(a);
    CHECK(a.mode() == PowerMode::nm);
  }
  SUBCASE("entry clears adjacency everywhere") {
    on_write(a.cell({1, 0}), a.behaviors({1, 0}), Bit::zero);
    on_lpm_enter(a);
    CHECK_FALSE(a.cell({1, 0}).just_written.has_value());
  }
  SUBCASE("exit flips a held vulnerable value exactly once") {
    on_write(a.cell({0, 1}), b, Bit::zero);
    on_lpm_enter(a);
    on_lpm_exit(a);
    CHECK(a.cell({0, 1}).stored == Bit::one);
    CHECK(a.cell({0, 1}).corrupted_by == Mechanism::post_lpm_fail);
    // second dwell: the cell no longer holds the vulnerable value
    on_lpm_enter(a);
    on_lpm_exit(a);
    CHECK(a.cell({0, 1}).stored == Bit::one);
  }
  SUBCASE("exit leaves the safe value alone") {
    on_write(a.cell({0, 1}), b, Bit::one);
    on_lpm_enter(a);
    on_lpm_exit(a);
    CHECK(a.cell({0, 1}).stored == Bit::one);
  }
  SUBCASE("exit arms the post-LPM read flip without changing the value") {
    MemoryArray m(1, 1, {});
    BehaviorSet lprf;
    lprf.post_lpm_read_flip = Bit::zero;
    m.inject({0, 0}, lprf);
    on_write(m.cell({0, 0}), lprf, Bit::zero);
    on_lpm_enter(m);
    on_lpm_exit(m);
    CHECK(m.cell({0, 0}).stored == Bit::zero);
    CHECK(m.cell({0, 0}).post_lpm_pending);
  }
}

TEST_CASE("quiescent current") {
  TechnologyProfile p;
  MemoryArray a(4, 4, p);
  for (const Address addr : address_sequence(AddressOrder::ascending, 4, 4))
    on_write(a.cell(addr), a.behaviors(addr), Bit::zero);

  SUBCASE("fault-free array sits at the baseline, below the limit") {
    CHECK(iddq_current(a) == 16.0);
    CHECK(iddq_current(a) < iddq_threshold(a));
    CHECK(iddq_threshold(a) == 21.0);
  }
  SUBCASE("one leaking cell shows up; the flip hides it again") {
    MemoryArray m(4, 4, p);
    BehaviorSet b;
    b.lpm_exit_flip = Bit::zero;
    b.iddq_leak = IddqLeakBehavior{Bit::zero, p.iddq_delta};
    m.inject({2, 3}, b);
    for (const Address addr : address_sequence(AddressOrder::ascending, 4, 4))
      on_write(m.cell(addr), m.behaviors(addr), Bit::zero);
    // independent tally of what the measurement should report
    double tally = 0;
    for (int i = 0; i < 16; ++i) tally += p.iddq_baseline;
    tally += p.iddq_delta;
    CHECK(iddq_current(m) == tally);
    CHECK(iddq_current(m) == 26.0);
    CHECK(iddq_current(m) > iddq_threshold(m));

    on_lpm_enter(m);
    on_lpm_exit(m);  // the vulnerable value is gone, and so is the leak
    CHECK(iddq_current(m) == 16.0);
  }
  SUBCASE("measuring in LPM is a sequencing error") {
    on_lpm_enter(a);
    CHECK_THROWS_AS(iddq_current(a), sequencing_error);
  }
}

// Any event soup on a defect-free array keeps cells equal to the fault-free
// shadow wherever the shadow is resolved.
TEST_CASE("fault-free transparency") {
  std::mt19937 rng(101);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<int> action(0, 99);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = dim(rng), cols = dim(rng);
    MemoryArray a(rows, cols, {});
    std::vector<std::optional<Bit>> shadow(static_cast<std::size_t>(rows) * cols);
    std::uniform_int_distribution<int> pick_row(0, rows - 1), pick_col(0, cols - 1);
    for (int step = 0; step < 200; ++step) {
      const Address addr{pick_row(rng), pick_col(rng)};
      const int roll = action(rng);
      if (a.mode() == PowerMode::lpm) {
        on_lpm_exit(a);
        continue;
      }
      if (roll < 40) {
        const Bit v = bit_of(roll % 2);
        on_write(a.cell(addr), a.behaviors(addr), v);
        a.write_shadow(addr, v);
        shadow[static_cast<std::size_t>(addr.row) * cols + addr.col] = v;
      } else if (roll < 70) {
        const auto sh = shadow[static_cast<std::size_t>(addr.row) * cols + addr.col];
        const auto out = on_read(a.cell(addr), a.behaviors(addr));
        if (sh) CHECK(out.value == *sh);
        for (const Address m : row_mates(addr, cols))
          on_indirect_read(a.cell(m), a.behaviors(m));
      } else if (roll < 80) {
        on_lpm_enter(a);
      } else if (roll < 90) {
        CHECK(iddq_current(a) == rows * cols * a.profile().iddq_baseline);
      } else {
        on_indirect_read(a.cell(addr), a.behaviors(addr));
      }
    }
    if (a.mode() == PowerMode::lpm) on_lpm_exit(a);
    for (const Address addr : address_sequence(AddressOrder::ascending, rows, cols)) {
      const auto sh = shadow[static_cast<std::size_t>(addr.row) * cols + addr.col];
      if (sh) CHECK(a.cell(addr).stored == *sh);
      CHECK(a.shadow(addr) == sh);
    }
  }
}
