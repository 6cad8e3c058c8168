#include "lpsram/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "lpsram/errors.hpp"

namespace lpsram {

namespace {

enum class TokKind { semi, lparen, rparen, comma, dir, word, integer, end };

struct Token {
  TokKind kind = TokKind::end;
  std::string text;          // word (lowercased) or integer digits
  AddressOrder dir = AddressOrder::ascending;  // valid for dir tokens
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_ws_and_comments();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) {
      t.kind = TokKind::end;
      return t;
    }
    const char c = text_[pos_];
    switch (c) {
      case ';': advance(); t.kind = TokKind::semi; return t;
      case '(': advance(); t.kind = TokKind::lparen; return t;
      case ')': advance(); t.kind = TokKind::rparen; return t;
      case ',': advance(); t.kind = TokKind::comma; return t;
      case '^': advance(); t.kind = TokKind::dir; t.dir = AddressOrder::ascending; return t;
      default: break;
    }
    if (auto arrow = match_arrow()) {
      t.kind = TokKind::dir;
      t.dir = *arrow;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
        t.text += static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_])));
        advance();
      }
      t.kind = TokKind::word;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        t.text += text_[pos_];
        advance();
      }
      t.kind = TokKind::integer;
      return t;
    }
    throw parse_error("unexpected character '" + std::string(1, c) + "'", line_, col_);
  }

 private:
  void advance() {
    if (pos_ < text_.size() && text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  // UTF-8 arrows accepted as direction aliases.
  std::optional<AddressOrder> match_arrow() {
    static constexpr struct {
      const char* bytes;
      AddressOrder order;
    } arrows[] = {
        {"\xE2\x87\x91", AddressOrder::ascending},   // up arrow
        {"\xE2\x87\x93", AddressOrder::descending},  // down arrow
        {"\xE2\x87\x95", AddressOrder::any},         // up-down arrow
    };
    for (const auto& a : arrows) {
      if (text_.compare(pos_, 3, a.bytes) == 0) {
        advance();
        advance();
        advance();
        return a.order;
      }
    }
    return std::nullopt;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { shift(); }

  TestProgram parse(std::string name) {
    TestProgram p;
    p.name = std::move(name);
    if (tok_.kind == TokKind::end) throw parse_error("empty program", tok_.line, tok_.col);
    while (true) {
      p.positions.push_back({tok_.line, tok_.col});
      p.items.push_back(parse_item());
      if (tok_.kind == TokKind::semi) {
        shift();
        if (tok_.kind == TokKind::end) break;  // trailing separator
        continue;
      }
      if (tok_.kind == TokKind::end) break;
      throw parse_error("expected ';' between items", tok_.line, tok_.col);
    }
    validate_program(p);
    return p;
  }

 private:
  void shift() { tok_ = lexer_.next(); }

  Token expect(TokKind kind, const std::string& what) {
    if (tok_.kind != kind) throw parse_error("expected " + what, tok_.line, tok_.col);
    Token t = tok_;
    shift();
    return t;
  }

  ProgramItem parse_item() {
    if (tok_.kind == TokKind::dir) {
      AddressOrder order = tok_.dir;
      shift();
      return parse_element(order);
    }
    if (tok_.kind == TokKind::word) {
      const std::string w = tok_.text;
      if (w == "v") { shift(); return parse_element(AddressOrder::descending); }
      if (w == "b") { shift(); return parse_element(AddressOrder::any); }
      if (w == "lpm") { shift(); return Command{Command::Kind::lpm}; }
      if (w == "nm") { shift(); return Command{Command::Kind::nm}; }
      if (w == "iddq") { shift(); return Command{Command::Kind::iddq}; }
      if (w == "res") {
        shift();
        expect(TokKind::lparen, "'(' after res");
        Token n = expect(TokKind::integer, "read count in res(...)");
        expect(TokKind::rparen, "')'");
        long count = 0;
        try {
          count = std::stol(n.text);
        } catch (const std::exception&) {
          throw parse_error("res count out of range", n.line, n.col);
        }
        if (count < 1) throw parse_error("res count must be at least 1", n.line, n.col);
        if (count > 1000000) throw parse_error("res count out of range", n.line, n.col);
        return Command{Command::Kind::res, static_cast<int>(count)};
      }
      throw parse_error("unknown item '" + w + "'", tok_.line, tok_.col);
    }
    throw parse_error("expected a March element or command", tok_.line, tok_.col);
  }

  MarchElement parse_element(AddressOrder order) {
    MarchElement e;
    e.order = order;
    expect(TokKind::lparen, "'(' after direction");
    while (true) {
      Token op = expect(TokKind::word, "a March operation");
      e.ops.push_back(parse_op(op));
      if (tok_.kind == TokKind::comma) {
        shift();
        continue;
      }
      expect(TokKind::rparen, "')' or ','");
      break;
    }
    return e;
  }

  static MarchOp parse_op(const Token& t) {
    static const std::map<std::string, MarchOp> ops = {
        {"w0", MarchOp::w0}, {"w1", MarchOp::w1}, {"r0", MarchOp::r0},
        {"r1", MarchOp::r1}, {"r", MarchOp::r_any},
    };
    auto it = ops.find(t.text);
    if (it == ops.end())
      throw parse_error("unknown operation '" + t.text + "'", t.line, t.col);
    return it->second;
  }

  Lexer lexer_;
  Token tok_;
};

char dir_char(AddressOrder order) {
  switch (order) {
    case AddressOrder::ascending: return '^';
    case AddressOrder::descending: return 'v';
    case AddressOrder::any: return 'b';
  }
  return '?';
}

const char* op_text(MarchOp op) {
  switch (op) {
    case MarchOp::w0: return "w0";
    case MarchOp::w1: return "w1";
    case MarchOp::r0: return "r0";
    case MarchOp::r1: return "r1";
    case MarchOp::r_any: return "r";
  }
  return "?";
}

}  // namespace

TestProgram parse_program(const std::string& text, std::string name) {
  return Parser(text).parse(std::move(name));
}

void validate_program(const TestProgram& p) {
  bool in_lpm = false;
  for (std::size_t i = 0; i < p.items.size(); ++i) {
    const int line = i < p.positions.size() ? p.positions[i].line : 0;
    const int col = i < p.positions.size() ? p.positions[i].col : 0;
    const int idx = static_cast<int>(i);
    if (const auto* e = std::get_if<MarchElement>(&p.items[i])) {
      if (e->ops.empty()) throw program_error("March element has no operations", idx, line, col);
      if (in_lpm) throw program_error("March element while in LPM", idx, line, col);
      continue;
    }
    const auto& cmd = std::get<Command>(p.items[i]);
    switch (cmd.kind) {
      case Command::Kind::lpm:
        if (in_lpm) throw program_error("lpm while already in LPM", idx, line, col);
        in_lpm = true;
        break;
      case Command::Kind::nm:
        if (!in_lpm) throw program_error("nm without a preceding lpm", idx, line, col);
        in_lpm = false;
        break;
      case Command::Kind::iddq:
        if (in_lpm) throw program_error("iddq while in LPM", idx, line, col);
        break;
      case Command::Kind::res:
        if (in_lpm) throw program_error("res while in LPM", idx, line, col);
        if (cmd.res_reads < 1) throw program_error("res count must be at least 1", idx, line, col);
        break;
    }
  }
}

std::string format_program(const TestProgram& p) {
  std::string out;
  for (std::size_t i = 0; i < p.items.size(); ++i) {
    if (i > 0) out += "; ";
    if (const auto* e = std::get_if<MarchElement>(&p.items[i])) {
      out += dir_char(e->order);
      out += '(';
      for (std::size_t k = 0; k < e->ops.size(); ++k) {
        if (k > 0) out += ',';
        out += op_text(e->ops[k]);
      }
      out += ')';
      continue;
    }
    const auto& cmd = std::get<Command>(p.items[i]);
    switch (cmd.kind) {
      case Command::Kind::lpm: out += "lpm"; break;
      case Command::Kind::nm: out += "nm"; break;
      case Command::Kind::iddq: out += "iddq"; break;
      case Command::Kind::res: out += "res(" + std::to_string(cmd.res_reads) + ")"; break;
    }
  }
  return out;
}

namespace {

// march_basic is a MATS+-style 6N test; march_raw adds write/read adjacency
// in both polarities (14N). The retention-oriented tests pair each polarity
// with its dwell or measurement.
const std::vector<std::pair<std::string, std::string>>& builtin_table() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"march_basic", "^(w0); ^(r0,w1); v(r1,w0); b(r0)"},
      {"march_raw", "^(w0); ^(r0,w0,r0); ^(r0,w1,r1); ^(r1,w1,r1); ^(r1,w0,r0); b(r0)"},
      {"lpr", "^(w0); lpm; nm; ^(r0); ^(w1); lpm; nm; ^(r1)"},
      {"iddq", "^(w0); iddq; ^(w1); iddq"},
      {"res", "^(w0); res(96); ^(r0); ^(w1); res(96); ^(r1)"},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, text] : builtin_table()) v.push_back(name);
    return v;
  }();
  return names;
}

bool is_builtin(const std::string& name) {
  for (const auto& [n, text] : builtin_table())
    if (n == name) return true;
  return false;
}

TestProgram builtin(const std::string& name) {
  for (const auto& [n, text] : builtin_table())
    if (n == name) return parse_program(text, n);
  throw config_error("unknown builtin test '" + name + "'");
}

CostEstimate cost_estimate(const TestProgram& p, int rows, int cols,
                           const TechnologyProfile& profile) {
  if (rows < 1 || cols < 1) throw config_error("array dimensions must be positive");
  const std::int64_t n = static_cast<std::int64_t>(rows) * cols;
  CostEstimate est;
  for (const auto& item : p.items) {
    if (const auto* e = std::get_if<MarchElement>(&item)) {
      est.op_count += n * static_cast<std::int64_t>(e->ops.size());
      continue;
    }
    const auto& cmd = std::get<Command>(item);
    switch (cmd.kind) {
      case Command::Kind::lpm: ++est.lpm_dwells; break;
      case Command::Kind::nm: break;
      case Command::Kind::iddq: ++est.iddq_measures; break;
      case Command::Kind::res:
        est.op_count += n * (static_cast<std::int64_t>(cmd.res_reads) + 2);
        break;
    }
  }
  est.cycles = est.op_count + est.lpm_dwells * profile.t_lpm +
               est.iddq_measures * profile.t_iddq;
  return est;
}

}  // namespace lpsram
