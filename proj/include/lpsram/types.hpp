#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace lpsram {

// Binary logic level of a cell node pair, abstracted to one stored bit.
enum class Bit : std::uint8_t { zero = 0, one = 1 };

constexpr Bit flip(Bit b) { return b == Bit::zero ? Bit::one : Bit::zero; }
constexpr int to_int(Bit b) { return b == Bit::one ? 1 : 0; }
constexpr Bit bit_of(int v) { return v ? Bit::one : Bit::zero; }

struct Address {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Address&, const Address&) = default;
};

std::string to_string(Address a);

// Traversal order of a March element. "Any" runs as ascending so that
// repeated runs are reproducible.
enum class AddressOrder { ascending, descending, any };

// How a detection came about. Attached to run results so coverage reports
// can say which fault primitive produced the failing observation.
enum class Mechanism {
  stuck_like,
  transition_fail,
  raw_fail,
  post_lpm_fail,
  stress_flip,
  iddq_over,
};

std::string to_string(Mechanism m);

}  // namespace lpsram
