#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "lpsram/defect.hpp"
#include "lpsram/types.hpp"

namespace lpsram {

// r0/r1 carry an expected value; r checks against the fault-free shadow.
enum class MarchOp { w0, w1, r0, r1, r_any };

constexpr bool is_read(MarchOp op) {
  return op == MarchOp::r0 || op == MarchOp::r1 || op == MarchOp::r_any;
}

struct MarchElement {
  AddressOrder order = AddressOrder::ascending;
  std::vector<MarchOp> ops;
  friend bool operator==(const MarchElement&, const MarchElement&) = default;
};

struct Command {
  enum class Kind { lpm, nm, iddq, res };
  Kind kind = Kind::lpm;
  int res_reads = 0;  // res only, >= 1
  friend bool operator==(const Command&, const Command&) = default;
};

using ProgramItem = std::variant<MarchElement, Command>;

struct SourcePos {
  int line = 0;
  int col = 0;
};

struct TestProgram {
  std::string name;
  std::vector<ProgramItem> items;
  // Parallel to items when parsed from text; empty for programs built in
  // code. Not part of program identity.
  std::vector<SourcePos> positions;
};

inline bool same_items(const TestProgram& a, const TestProgram& b) {
  return a.items == b.items;
}

// Grammar:
//   program := item (';' item)* [';']
//   item    := element | command
//   element := dir '(' op (',' op)* ')'
//   dir     := '^' | 'v' | 'b'            (aliases: '⇑' '⇓' '⇕')
//   op      := 'w0' | 'w1' | 'r0' | 'r1' | 'r'
//   command := 'lpm' | 'nm' | 'iddq' | 'res(' int ')'
// Keywords are case-insensitive; whitespace and '#' line comments are
// ignored. Static rules (lpm/nm alternation from NM, no element/iddq/res
// while in LPM) are enforced after parsing.
TestProgram parse_program(const std::string& text, std::string name = "");

// Canonical form: lowercase, "; " separators, ASCII direction symbols.
// parse_program(format_program(p)) has the same items as p.
std::string format_program(const TestProgram& p);

// Throws program_error on the first static violation.
void validate_program(const TestProgram& p);

const std::vector<std::string>& builtin_names();
bool is_builtin(const std::string& name);
TestProgram builtin(const std::string& name);

struct CostEstimate {
  std::int64_t cycles = 0;
  std::int64_t op_count = 0;
  int lpm_dwells = 0;
  int iddq_measures = 0;
  friend bool operator==(const CostEstimate&, const CostEstimate&) = default;
};

// One cycle per memory operation; each LPM dwell costs t_lpm and each IDDQ
// measurement t_iddq. A res(n) visits every cell as victim: one pre read,
// n stress reads, one post read (assumes at least two columns).
CostEstimate cost_estimate(const TestProgram& p, int rows, int cols,
                           const TechnologyProfile& profile);

}  // namespace lpsram
