#include "lpsram/types.hpp"

namespace lpsram {

std::string to_string(Address a) {
  return "(" + std::to_string(a.row) + "," + std::to_string(a.col) + ")";
}

std::string to_string(Mechanism m) {
  switch (m) {
    case Mechanism::stuck_like: return "StuckLike";
    case Mechanism::transition_fail: return "TransitionFail";
    case Mechanism::raw_fail: return "RawFail";
    case Mechanism::post_lpm_fail: return "PostLpmFail";
    case Mechanism::stress_flip: return "StressFlip";
    case Mechanism::iddq_over: return "IddqOver";
  }
  return "?";
}

}  // namespace lpsram
