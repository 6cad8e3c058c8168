#include "lpsram/errors.hpp"

namespace lpsram {

namespace {

std::string at_pos(const std::string& msg, int line, int col) {
  return "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg;
}

std::string at_item(const std::string& msg, int item, int line, int col) {
  std::string s = "item " + std::to_string(item);
  if (line > 0) s += " (line " + std::to_string(line) + ", col " + std::to_string(col) + ")";
  return s + ": " + msg;
}

}  // namespace

parse_error::parse_error(const std::string& msg, int line, int col)
    : error(at_pos(msg, line, col)), line_(line), col_(col) {}

program_error::program_error(const std::string& msg, int item, int line, int col)
    : error(at_item(msg, item, line, col)), item_(item), line_(line), col_(col) {}

}  // namespace lpsram
