#include <random>

#include "doctest.h"
#include "lpsram/defect.hpp"
#include "lpsram/errors.hpp"

using namespace lpsram;

namespace {

Defect make(DefectKind k, Bit pol, double r) { return Defect{k, pol, r, {0, 0}}; }

// Range signature used by the piecewise-constancy checks: which configured
// interval the resistance falls in, including sub-range membership.
int range_id(DefectKind k, double r, const TechnologyProfile& p) {
  switch (k) {
    case DefectKind::r1:
      if (r < p.r1_low) return 0;
      if (r <= p.r1_high) return p.r1_res_sub.contains(r) ? 2 : 1;
      return 3;
    case DefectKind::r2:
      if (r < p.r2_low) return 0;
      return r < p.r2_high ? 1 : 2;
    case DefectKind::r3:
      return r < p.r3_low ? 0 : 1;
  }
  return -1;
}

}  // namespace

TEST_CASE("canonicalize folds all ten placements") {
  const auto r8 = canonicalize("R8");
  CHECK(r8.kind == DefectKind::r1);
  CHECK(r8.vulnerable == Bit::zero);
  const auto r6 = canonicalize("R6");
  CHECK(r6.kind == DefectKind::r3);
  CHECK(r6.vulnerable == Bit::zero);
  const auto r5 = canonicalize("r5");
  CHECK(r5.kind == DefectKind::r2);
  CHECK(r5.vulnerable == Bit::one);

  CHECK(canonicalize("R1").kind == DefectKind::r1);
  CHECK(canonicalize("R1").vulnerable == Bit::zero);
  CHECK(canonicalize("R4").vulnerable == Bit::one);
  CHECK(canonicalize("R7").vulnerable == Bit::one);
  CHECK(canonicalize("R2").vulnerable == Bit::zero);
  CHECK(canonicalize("R9").vulnerable == Bit::zero);
  CHECK(canonicalize("R10").vulnerable == Bit::one);
  CHECK(canonicalize("R3").vulnerable == Bit::one);

  CHECK_THROWS_AS(canonicalize("R11"), config_error);
  CHECK_THROWS_AS(canonicalize(""), config_error);
}

TEST_CASE("classification per range") {
  const TechnologyProfile p;

  SUBCASE("R1 low range is a bare stuck-at") {
    const auto b = classify_defect(make(DefectKind::r1, Bit::zero, 10e3), p);
    CHECK(b.stuck_at == Bit::one);
    BehaviorSet only_stuck;
    only_stuck.stuck_at = Bit::one;
    CHECK(b == only_stuck);
  }
  SUBCASE("R1 mid range, inside the RES sub-range") {
    const auto b = classify_defect(make(DefectKind::r1, Bit::zero, 30e3), p);
    CHECK(b.lpm_exit_flip == Bit::zero);
    REQUIRE(b.iddq_leak.has_value());
    CHECK(b.iddq_leak->vulnerable == Bit::zero);
    CHECK(b.iddq_leak->delta == p.iddq_delta);
    REQUIRE(b.res_flip.has_value());
    CHECK(b.res_flip->vulnerable == Bit::zero);
    CHECK(b.res_flip->stress_to_flip == 64);
    CHECK_FALSE(b.stuck_at);
  }
  SUBCASE("R1 mid range, outside the RES sub-range") {
    const auto b = classify_defect(make(DefectKind::r1, Bit::zero, 22e3), p);
    CHECK(b.lpm_exit_flip == Bit::zero);
    CHECK(b.iddq_leak.has_value());
    CHECK_FALSE(b.res_flip.has_value());
  }
  SUBCASE("R1 high range has no effect") {
    CHECK(classify_defect(make(DefectKind::r1, Bit::zero, 1e6), p).empty());
  }
  SUBCASE("R2 mid range") {
    const auto b = classify_defect(make(DefectKind::r2, Bit::zero, 5e6), p);
    CHECK(b.raw_flip == Bit::zero);
    CHECK_FALSE(b.post_lpm_read_flip);
  }
  SUBCASE("R2 high range adds the post-LPM read flip") {
    const auto b = classify_defect(make(DefectKind::r2, Bit::zero, 20e6), p);
    CHECK(b.raw_flip == Bit::zero);
    CHECK(b.post_lpm_read_flip == Bit::zero);
  }
  SUBCASE("R3") {
    CHECK(classify_defect(make(DefectKind::r3, Bit::one, 10e3), p).empty());
    const auto b = classify_defect(make(DefectKind::r3, Bit::one, 100e3), p);
    CHECK(b.transition_to == Bit::one);
  }
  SUBCASE("non-positive resistance") {
    CHECK_THROWS_AS(classify_defect(make(DefectKind::r1, Bit::zero, 0), p), config_error);
    CHECK_THROWS_AS(classify_defect(make(DefectKind::r1, Bit::zero, -5), p), config_error);
  }
}

TEST_CASE("range boundaries: lower bounds in, upper bounds out, except r1_high and r2_high") {
  const TechnologyProfile p;
  CHECK(classify_defect(make(DefectKind::r1, Bit::zero, p.r1_low), p).lpm_exit_flip.has_value());
  CHECK(classify_defect(make(DefectKind::r1, Bit::zero, p.r1_high), p).lpm_exit_flip.has_value());
  CHECK(classify_defect(make(DefectKind::r1, Bit::zero, p.r1_high * 1.000001), p).empty());
  CHECK(classify_defect(make(DefectKind::r1, Bit::zero, p.r1_res_sub.lo), p).res_flip.has_value());
  CHECK(classify_defect(make(DefectKind::r1, Bit::zero, p.r1_res_sub.hi), p).res_flip.has_value());
  CHECK_FALSE(
      classify_defect(make(DefectKind::r1, Bit::zero, p.r1_res_sub.hi * 1.000001), p).res_flip);
  CHECK(classify_defect(make(DefectKind::r2, Bit::zero, p.r2_low), p).raw_flip.has_value());
  CHECK(classify_defect(make(DefectKind::r2, Bit::zero, p.r2_high), p).post_lpm_read_flip.has_value());
  CHECK_FALSE(
      classify_defect(make(DefectKind::r2, Bit::zero, p.r2_high * 0.999999), p).post_lpm_read_flip);
  CHECK(classify_defect(make(DefectKind::r3, Bit::one, p.r3_low), p).transition_to.has_value());
  CHECK(classify_defect(make(DefectKind::r3, Bit::one, p.r3_low * 0.999999), p).empty());
}

TEST_CASE("classification is piecewise constant in resistance") {
  const TechnologyProfile p;
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> logr(std::log(1e3), std::log(1e8));
  for (const DefectKind kind : {DefectKind::r1, DefectKind::r2, DefectKind::r3}) {
    BehaviorSet per_range[4];
    bool seen[4] = {};
    for (int trial = 0; trial < 500; ++trial) {
      const double r = std::exp(logr(rng));
      const int id = range_id(kind, r, p);
      const auto b = classify_defect(make(kind, Bit::zero, r), p);
      if (!seen[id]) {
        per_range[id] = b;
        seen[id] = true;
      } else {
        CHECK(b == per_range[id]);
      }
    }
  }
}

TEST_CASE("polarity equivariance") {
  const TechnologyProfile p;
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> logr(std::log(1e3), std::log(1e8));
  std::uniform_int_distribution<int> kind(0, 2);
  for (int trial = 0; trial < 300; ++trial) {
    const Defect d{static_cast<DefectKind>(kind(rng)), Bit::zero, std::exp(logr(rng)), {0, 0}};
    CHECK(classify_defect(mirrored(d), p) == mirrored(classify_defect(d, p)));
  }
}

TEST_CASE("stuck-at never mixes with other behaviors") {
  const TechnologyProfile p;
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> logr(std::log(1e2), std::log(1e9));
  std::uniform_int_distribution<int> kind(0, 2);
  for (int trial = 0; trial < 500; ++trial) {
    const auto b = classify_defect(
        make(static_cast<DefectKind>(kind(rng)), Bit::one, std::exp(logr(rng))), p);
    if (b.stuck_at) {
      BehaviorSet only_stuck;
      only_stuck.stuck_at = b.stuck_at;
      CHECK(b == only_stuck);
    }
  }
}

TEST_CASE("profile validation") {
  CHECK(validate_profile({}).empty());

  TechnologyProfile bad;
  bad.r1_low = 40e3;
  bad.r1_high = 35e3;
  auto v = validate_profile(bad);
  REQUIRE_FALSE(v.empty());
  bool found = false;
  for (const auto& s : v)
    if (s.find("r1_low < r1_high") != std::string::npos) found = true;
  CHECK(found);

  TechnologyProfile bad_sub;
  bad_sub.r1_res_sub = {10e3, 15e3};
  v = validate_profile(bad_sub);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("r1_res_sub") != std::string::npos);

  TechnologyProfile bad_margin;
  bad_margin.iddq_delta = 4;  // margin 5 would mask a single leaking cell
  CHECK_FALSE(validate_profile(bad_margin).empty());

  CHECK_THROWS_AS(require_valid(bad), config_error);
}

TEST_CASE("profile JSON round trip") {
  TechnologyProfile p;
  p.r1_res_sub = {21e3, 34e3};
  p.res_k = 128;
  p.t_lpm = 5;
  const auto back = profile_from_json(profile_to_json(p));
  CHECK(back == p);
}

TEST_CASE("profile JSON rejects unknown fields, keeps defaults for absent ones") {
  const auto p = profile_from_json(R"({"r1_low": 25000})");
  CHECK(p.r1_low == 25000);
  CHECK(p.r1_high == TechnologyProfile{}.r1_high);

  CHECK_THROWS_AS(profile_from_json(R"({"r1_lo": 25000})"), config_error);
  CHECK_THROWS_AS(profile_from_json(R"({"r1_res_sub": 28000})"), config_error);
  CHECK_THROWS_AS(profile_from_json(R"({"r1_low": "cheap"})"), config_error);
  CHECK_THROWS_AS(profile_from_json("[1,2]"), config_error);
  CHECK_THROWS_AS(profile_from_json("not json"), config_error);
}
