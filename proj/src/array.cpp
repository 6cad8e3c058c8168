#include "lpsram/array.hpp"

#include <algorithm>

#include "lpsram/errors.hpp"

namespace lpsram {

std::vector<Address> address_sequence(AddressOrder order, int rows, int cols) {
  if (rows < 1 || cols < 1) throw config_error("array dimensions must be positive");
  std::vector<Address> seq;
  seq.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) seq.push_back({r, c});
  if (order == AddressOrder::descending) std::reverse(seq.begin(), seq.end());
  return seq;
}

std::vector<Address> row_mates(Address addr, int cols) {
  std::vector<Address> mates;
  mates.reserve(cols > 0 ? static_cast<std::size_t>(cols) - 1 : 0);
  for (int c = 0; c < cols; ++c)
    if (c != addr.col) mates.push_back({addr.row, c});
  return mates;
}

MemoryArray::MemoryArray(int rows, int cols, TechnologyProfile profile)
    : rows_(rows), cols_(cols), profile_(std::move(profile)) {
  if (rows < 1 || cols < 1) throw config_error("array dimensions must be positive");
  const auto n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  cells_.resize(n);
  shadow_.resize(n);
  behaviors_.resize(n);
  occupied_.resize(n, false);
}

bool MemoryArray::in_bounds(Address a) const {
  return a.row >= 0 && a.row < rows_ && a.col >= 0 && a.col < cols_;
}

int MemoryArray::index(Address a) const { return a.row * cols_ + a.col; }

void MemoryArray::inject(const Defect& d) {
  if (!in_bounds(d.location))
    throw config_error("defect location " + to_string(d.location) + " out of bounds");
  inject(d.location, classify_defect(d, profile_));
}

void MemoryArray::inject(Address a, BehaviorSet b) {
  if (!in_bounds(a)) throw config_error("defect location " + to_string(a) + " out of bounds");
  if (b.stuck_at) {
    BehaviorSet only_stuck;
    only_stuck.stuck_at = b.stuck_at;
    if (!(only_stuck == b))
      throw config_error("a stuck-at cell admits no other behaviors");
  }
  const int i = index(a);
  if (occupied_[i]) throw config_error("defect address collision at " + to_string(a));
  occupied_[i] = true;
  behaviors_[i] = std::move(b);
}

bool MemoryArray::any_res_flip() const {
  return std::any_of(behaviors_.begin(), behaviors_.end(),
                     [](const BehaviorSet& b) { return b.res_flip.has_value(); });
}

}  // namespace lpsram
