#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lpsram/array.hpp"
#include "lpsram/dsl.hpp"

namespace lpsram {

enum class ObsKind { read_check, iddq_check };
enum class ResStage { none, pre, stress, post };
enum class Verdict { undetected, detected };
enum class ResOutcome { res_detected, res_undetected, non_res_detection };

// One checked event. For read checks expected/got are bit values; for IDDQ
// checks they are the current ceiling and the measured current.
struct Observation {
  std::int64_t cycle = 0;
  int item = 0;
  ResStage res_stage = ResStage::none;
  std::optional<Address> addr;  // empty for array-level (IDDQ) checks
  ObsKind kind = ObsKind::read_check;
  double expected = 0.0;
  double got = 0.0;
  bool pass = true;
};

// e.g. "element[2]", "iddq[1]", "res[4].post"
std::string phase_label(const Observation& o);

struct RunResult {
  std::vector<Observation> observations;
  Verdict verdict = Verdict::undetected;
  std::set<Mechanism> mechanisms;
  CostEstimate cost;  // realized cost of this run
  std::vector<std::string> warnings;
  bool has_res = false;  // the program contained at least one res command
};

// Runs the program on a fresh rows x cols array with the given defects
// injected. Defects must have distinct in-bounds addresses. Observations
// record every read and IDDQ check in execution order; the verdict is
// Detected exactly when some observation fails.
RunResult execute(const TestProgram& program, int rows, int cols,
                  const std::vector<Defect>& defects,
                  const TechnologyProfile& profile);

// RES methodology credit: detected only when some victim's post-stress read
// fails after its pre-stress read passed within the same res command.
ResOutcome res_verdict(const RunResult& r);

// Coverage-table verdict: the res builtin is credited only for stress
// detections; every other test counts any failing observation.
bool detected_for_table(const std::string& test_name, const RunResult& r);

std::string to_string(Verdict v);

std::string run_result_to_json(const RunResult& r, bool failures_only = false);

}  // namespace lpsram
