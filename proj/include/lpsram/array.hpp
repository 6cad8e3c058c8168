#pragma once

#include <optional>
#include <vector>

#include "lpsram/defect.hpp"
#include "lpsram/types.hpp"

namespace lpsram {

// One back-bias domain per array: the whole array is either accessible (NM)
// or retention-only (LPM).
enum class PowerMode { nm, lpm };

struct CellState {
  std::optional<Bit> stored;        // nullopt until first resolved
  std::optional<Bit> just_written;  // last write, cleared by any other event on the cell
  int res_stress_count = 0;
  bool post_lpm_pending = false;
  // Engine bookkeeping: which fault primitive last corrupted the stored
  // value, for verdict attribution. Cleared by a successful write.
  std::optional<Mechanism> corrupted_by;
};

// Ascending is row-major; descending is its exact reverse; any runs as
// ascending.
std::vector<Address> address_sequence(AddressOrder order, int rows, int cols);

// Cells sharing addr's word line, ascending column order, addr excluded.
std::vector<Address> row_mates(Address addr, int cols);

class MemoryArray {
 public:
  MemoryArray(int rows, int cols, TechnologyProfile profile);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  PowerMode mode() const { return mode_; }
  void set_mode(PowerMode m) { mode_ = m; }
  const TechnologyProfile& profile() const { return profile_; }

  bool in_bounds(Address a) const;
  CellState& cell(Address a) { return cells_[index(a)]; }
  const CellState& cell(Address a) const { return cells_[index(a)]; }
  const BehaviorSet& behaviors(Address a) const { return behaviors_[index(a)]; }

  // Fault-free expected values. Writes always update the shadow; nothing
  // else ever does.
  std::optional<Bit> shadow(Address a) const { return shadow_[index(a)]; }
  void write_shadow(Address a, Bit v) { shadow_[index(a)] = v; }

  // At most one defect per cell; a second injection at the same address is
  // a collision even if its behavior set is empty.
  void inject(const Defect& d);
  void inject(Address a, BehaviorSet b);

  bool any_res_flip() const;

  std::vector<CellState>& cells() { return cells_; }
  const std::vector<CellState>& cells() const { return cells_; }
  const std::vector<BehaviorSet>& all_behaviors() const { return behaviors_; }

 private:
  int index(Address a) const;

  int rows_;
  int cols_;
  PowerMode mode_ = PowerMode::nm;
  TechnologyProfile profile_;
  std::vector<CellState> cells_;
  std::vector<std::optional<Bit>> shadow_;
  std::vector<BehaviorSet> behaviors_;
  std::vector<bool> occupied_;
};

}  // namespace lpsram
