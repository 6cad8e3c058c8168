#pragma once

#include <stdexcept>
#include <string>

namespace lpsram {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad dimensions, profiles, defect specs, unknown test names.
class config_error : public error {
 public:
  using error::error;
};

// Lexical or grammatical problem in test-program text. Positions are 1-based.
class parse_error : public error {
 public:
  parse_error(const std::string& msg, int line, int col);
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

// Structurally well-formed program violating a static rule (e.g. a March
// element while in LPM). Carries the item index; line/col are 0 for
// programs built in code rather than parsed.
class program_error : public error {
 public:
  program_error(const std::string& msg, int item, int line = 0, int col = 0);
  int item() const { return item_; }
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int item_;
  int line_;
  int col_;
};

// Mode transition or measurement applied in the wrong power mode.
class sequencing_error : public error {
 public:
  using error::error;
};

}  // namespace lpsram
