#include "lpsram/defect.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "lpsram/errors.hpp"
#include "json.hpp"

namespace lpsram {

std::string to_string(DefectKind k) {
  switch (k) {
    case DefectKind::r1: return "R1";
    case DefectKind::r2: return "R2";
    case DefectKind::r3: return "R3";
  }
  return "?";
}

DefectKind defect_kind_from_string(const std::string& s) {
  if (s == "R1" || s == "r1") return DefectKind::r1;
  if (s == "R2" || s == "r2") return DefectKind::r2;
  if (s == "R3" || s == "r3") return DefectKind::r3;
  throw config_error("unknown defect kind '" + s + "'");
}

bool BehaviorSet::empty() const {
  return !stuck_at && !transition_to && !raw_flip && !lpm_exit_flip &&
         !post_lpm_read_flip && !res_flip && !iddq_leak;
}

BehaviorSet mirrored(const BehaviorSet& b) {
  BehaviorSet m;
  if (b.stuck_at) m.stuck_at = flip(*b.stuck_at);
  if (b.transition_to) m.transition_to = flip(*b.transition_to);
  if (b.raw_flip) m.raw_flip = flip(*b.raw_flip);
  if (b.lpm_exit_flip) m.lpm_exit_flip = flip(*b.lpm_exit_flip);
  if (b.post_lpm_read_flip) m.post_lpm_read_flip = flip(*b.post_lpm_read_flip);
  if (b.res_flip) m.res_flip = ResFlipBehavior{flip(b.res_flip->vulnerable), b.res_flip->stress_to_flip};
  if (b.iddq_leak) m.iddq_leak = IddqLeakBehavior{flip(b.iddq_leak->vulnerable), b.iddq_leak->delta};
  return m;
}

Defect mirrored(const Defect& d) {
  Defect m = d;
  m.vulnerable = flip(d.vulnerable);
  return m;
}

std::vector<std::string> validate_profile(const TechnologyProfile& p) {
  std::vector<std::string> v;
  if (!(p.r1_low > 0)) v.push_back("r1_low > 0");
  if (!(p.r1_low < p.r1_high)) v.push_back("r1_low < r1_high");
  if (!(p.r1_res_sub.lo <= p.r1_res_sub.hi && p.r1_res_sub.lo > p.r1_low &&
        p.r1_res_sub.hi < p.r1_high))
    v.push_back("r1_res_sub inside (r1_low, r1_high)");
  if (!(p.r2_low > 0)) v.push_back("r2_low > 0");
  if (!(p.r2_low < p.r2_high)) v.push_back("r2_low < r2_high");
  if (!(p.r3_low > 0)) v.push_back("r3_low > 0");
  if (!(p.res_k >= 1)) v.push_back("res_k >= 1");
  if (!(p.iddq_threshold_margin > 0)) v.push_back("iddq_threshold_margin > 0");
  if (!(p.iddq_delta > p.iddq_threshold_margin)) v.push_back("iddq_delta > iddq_threshold_margin");
  if (!(p.t_lpm >= 1)) v.push_back("t_lpm >= 1");
  if (!(p.t_iddq >= 1)) v.push_back("t_iddq >= 1");
  return v;
}

void require_valid(const TechnologyProfile& p) {
  auto v = validate_profile(p);
  if (v.empty()) return;
  std::string msg = "invalid profile:";
  for (const auto& s : v) msg += " [" + s + "]";
  throw config_error(msg);
}

CanonicalDefect canonicalize(const std::string& label) {
  std::string up = label;
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  static const std::map<std::string, CanonicalDefect> table = {
      {"R1", {DefectKind::r1, Bit::zero}},  {"R8", {DefectKind::r1, Bit::zero}},
      {"R4", {DefectKind::r1, Bit::one}},   {"R7", {DefectKind::r1, Bit::one}},
      {"R2", {DefectKind::r2, Bit::zero}},  {"R9", {DefectKind::r2, Bit::zero}},
      {"R5", {DefectKind::r2, Bit::one}},   {"R10", {DefectKind::r2, Bit::one}},
      {"R3", {DefectKind::r3, Bit::one}},   {"R6", {DefectKind::r3, Bit::zero}},
  };
  auto it = table.find(up);
  if (it == table.end()) throw config_error("unknown defect label '" + label + "'");
  return it->second;
}

BehaviorSet classify_defect(const Defect& d, const TechnologyProfile& p) {
  if (!(d.resistance > 0)) throw config_error("defect resistance must be positive");
  const double r = d.resistance;
  const Bit pol = d.vulnerable;
  BehaviorSet out;
  switch (d.kind) {
    case DefectKind::r1:
      if (r < p.r1_low) {
        out.stuck_at = flip(pol);  // cannot be written with the vulnerable value
      } else if (r <= p.r1_high) {
        out.lpm_exit_flip = pol;
        out.iddq_leak = IddqLeakBehavior{pol, p.iddq_delta};
        if (p.r1_res_sub.contains(r)) out.res_flip = ResFlipBehavior{pol, p.res_k};
      }
      break;
    case DefectKind::r2:
      if (r >= p.r2_low) {
        out.raw_flip = pol;
        if (r >= p.r2_high) out.post_lpm_read_flip = pol;
      }
      break;
    case DefectKind::r3:
      if (r >= p.r3_low) out.transition_to = pol;
      break;
  }
  return out;
}

std::string profile_to_json(const TechnologyProfile& p) {
  nlohmann::ordered_json j;
  j["r1_low"] = p.r1_low;
  j["r1_high"] = p.r1_high;
  j["r1_res_sub"] = {p.r1_res_sub.lo, p.r1_res_sub.hi};
  j["r2_low"] = p.r2_low;
  j["r2_high"] = p.r2_high;
  j["r3_low"] = p.r3_low;
  j["res_k"] = p.res_k;
  j["iddq_baseline"] = p.iddq_baseline;
  j["iddq_delta"] = p.iddq_delta;
  j["iddq_threshold_margin"] = p.iddq_threshold_margin;
  j["t_lpm"] = p.t_lpm;
  j["t_iddq"] = p.t_iddq;
  return j.dump(2);
}

TechnologyProfile profile_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("profile is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("profile must be a JSON object");

  TechnologyProfile p;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "r1_low") p.r1_low = value.get<double>();
      else if (key == "r1_high") p.r1_high = value.get<double>();
      else if (key == "r1_res_sub") {
        if (!value.is_array() || value.size() != 2)
          throw config_error("profile field 'r1_res_sub' must be [lo, hi]");
        p.r1_res_sub = OhmInterval{value[0].get<double>(), value[1].get<double>()};
      } else if (key == "r2_low") p.r2_low = value.get<double>();
      else if (key == "r2_high") p.r2_high = value.get<double>();
      else if (key == "r3_low") p.r3_low = value.get<double>();
      else if (key == "res_k") p.res_k = value.get<int>();
      else if (key == "iddq_baseline") p.iddq_baseline = value.get<double>();
      else if (key == "iddq_delta") p.iddq_delta = value.get<double>();
      else if (key == "iddq_threshold_margin") p.iddq_threshold_margin = value.get<double>();
      else if (key == "t_lpm") p.t_lpm = value.get<std::int64_t>();
      else if (key == "t_iddq") p.t_iddq = value.get<std::int64_t>();
      else throw config_error("unknown profile field '" + key + "'");
    } catch (const nlohmann::json::exception&) {
      throw config_error("profile field '" + key + "' has the wrong type");
    }
  }
  return p;
}

}  // namespace lpsram
