#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpsram/types.hpp"

namespace lpsram {

// Canonical resistive defect sites inside the 6T cell. The ten concrete
// placements R1..R10 fold onto these three by circuit symmetry; the fold is
// implemented by canonicalize().
enum class DefectKind {
  r1,  // bridge on an inverter gate
  r2,  // open at a transistor source
  r3,  // open between the inverters
};

std::string to_string(DefectKind k);
DefectKind defect_kind_from_string(const std::string& s);

// A located resistive defect. `vulnerable` is the stored/written value under
// which the defect acts; mirroring it mirrors every induced behavior.
struct Defect {
  DefectKind kind = DefectKind::r1;
  Bit vulnerable = Bit::zero;
  double resistance = 0.0;  // ohms
  Address location;
};

struct ResFlipBehavior {
  Bit vulnerable = Bit::zero;
  int stress_to_flip = 0;  // uninterrupted indirect reads needed
  friend bool operator==(const ResFlipBehavior&, const ResFlipBehavior&) = default;
};

struct IddqLeakBehavior {
  Bit vulnerable = Bit::zero;
  double delta = 0.0;  // extra quiescent current while holding the vulnerable value
  friend bool operator==(const IddqLeakBehavior&, const IddqLeakBehavior&) = default;
};

// Active behavioral fault primitives of one defective cell. Empty set means
// the defect has no functional effect. A stuck-at cell has no other
// behaviors; classify_defect never produces such a mix and inject() rejects
// hand-built ones.
struct BehaviorSet {
  std::optional<Bit> stuck_at;            // reads return this value, writes cannot move it
  std::optional<Bit> transition_to;       // writes of this value fail from the complement state
  std::optional<Bit> raw_flip;            // flips on a read immediately after writing this value
  std::optional<Bit> lpm_exit_flip;       // flips on LPM exit while holding this value
  std::optional<Bit> post_lpm_read_flip;  // flips on the first read after LPM exit
  std::optional<ResFlipBehavior> res_flip;
  std::optional<IddqLeakBehavior> iddq_leak;

  bool empty() const;
  friend bool operator==(const BehaviorSet&, const BehaviorSet&) = default;
};

BehaviorSet mirrored(const BehaviorSet& b);
Defect mirrored(const Defect& d);

struct OhmInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double r) const { return lo <= r && r <= hi; }
  friend bool operator==(const OhmInterval&, const OhmInterval&) = default;
};

// Resistance thresholds separating the behavior ranges, plus the abstract
// cost and current constants used by the execution engine. Defaults follow
// a 160nm-class low-power cell; all values are configuration.
struct TechnologyProfile {
  double r1_low = 20e3;
  double r1_high = 35e3;
  OhmInterval r1_res_sub{28e3, 32e3};  // RES-detectable sub-range of [r1_low, r1_high]
  double r2_low = 3e6;
  double r2_high = 15e6;
  double r3_low = 30e3;
  int res_k = 64;  // uninterrupted indirect reads that flip a RES-sensitive cell
  double iddq_baseline = 1.0;  // quiescent current per cell, abstract units
  double iddq_delta = 10.0;    // extra current of one leaking cell
  double iddq_threshold_margin = 5.0;
  std::int64_t t_lpm = 100000;  // cycles charged per LPM dwell
  std::int64_t t_iddq = 1000;   // cycles charged per IDDQ measurement

  friend bool operator==(const TechnologyProfile&, const TechnologyProfile&) = default;
};

// Empty result means the profile is usable. Each violation names the field
// and the broken relation.
std::vector<std::string> validate_profile(const TechnologyProfile& p);
void require_valid(const TechnologyProfile& p);  // throws config_error

struct CanonicalDefect {
  DefectKind kind;
  Bit vulnerable;
};

// Folds any of the placements R1..R10 onto the canonical kind and polarity.
CanonicalDefect canonicalize(const std::string& label);

// Maps a defect to the behaviors it induces under the given thresholds.
// Lower bounds are inclusive and upper bounds exclusive, except that
// r1_high stays in the R1 mid range and r2_high in the R2 top range, so
// every resistance lands in exactly one range.
BehaviorSet classify_defect(const Defect& d, const TechnologyProfile& p);

// JSON document with exactly the TechnologyProfile field names; unknown
// fields are rejected, absent fields keep their defaults.
std::string profile_to_json(const TechnologyProfile& p);
TechnologyProfile profile_from_json(const std::string& text);

}  // namespace lpsram
