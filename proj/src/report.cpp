#include "lpsram/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "lpsram/errors.hpp"
#include "json.hpp"

namespace lpsram {

namespace {

constexpr int kSweepRows = 4;
constexpr int kSweepCols = 4;
constexpr Address kSweepLocation{1, 1};

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string join_mechanisms(const std::set<Mechanism>& ms) {
  std::string out;
  for (const Mechanism m : ms) {
    if (!out.empty()) out += ';';
    out += to_string(m);
  }
  return out;
}

Mechanism mechanism_from_string(const std::string& s) {
  for (const Mechanism m : {Mechanism::stuck_like, Mechanism::transition_fail,
                            Mechanism::raw_fail, Mechanism::post_lpm_fail,
                            Mechanism::stress_flip, Mechanism::iddq_over}) {
    if (to_string(m) == s) return m;
  }
  throw config_error("unknown mechanism '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (const char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

TableVerdict run_point(DefectKind kind, Bit polarity, double resistance,
                       const TestProgram& test, const TechnologyProfile& profile,
                       std::set<Mechanism>* mechanisms, std::int64_t* cycles) {
  const Defect d{kind, polarity, resistance, kSweepLocation};
  const BehaviorSet bs = classify_defect(d, profile);
  const RunResult run = execute(test, kSweepRows, kSweepCols, {d}, profile);
  if (mechanisms) *mechanisms = run.mechanisms;
  if (cycles) *cycles = run.cost.cycles;
  if (bs.empty()) return TableVerdict::no_effect;
  return detected_for_table(test.name, run) ? TableVerdict::detected
                                            : TableVerdict::undetected;
}

}  // namespace

std::string to_string(TableVerdict v) {
  switch (v) {
    case TableVerdict::detected: return "Detected";
    case TableVerdict::undetected: return "Undetected";
    case TableVerdict::no_effect: return "No Effect";
  }
  return "?";
}

TableVerdict table_verdict_from_string(const std::string& s) {
  if (s == "Detected") return TableVerdict::detected;
  if (s == "Undetected") return TableVerdict::undetected;
  if (s == "No Effect") return TableVerdict::no_effect;
  throw config_error("unknown verdict '" + s + "'");
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0) || hi < lo || points < 1) throw config_error("bad sweep grid");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  if (points == 1) {
    out.push_back(lo);
    return out;
  }
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < points; ++i)
    out.push_back(lo * std::exp(ratio * i / (points - 1)));
  out.back() = hi;
  return out;
}

SweepReport sweep(std::optional<DefectKind> kind, Bit polarity,
                  const std::vector<double>& grid,
                  const std::vector<TestProgram>& tests,
                  const TechnologyProfile& profile) {
  require_valid(profile);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0)) throw config_error("sweep resistances must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw config_error("sweep resistances must be strictly increasing");
  }
  SweepReport report;
  for (const double r : grid) {
    for (const TestProgram& t : tests) {
      SweepRow row;
      row.kind = kind;
      row.resistance = r;
      row.test = t.name;
      if (kind) {
        row.polarity = polarity;
        row.verdict = run_point(*kind, polarity, r, t, profile, &row.mechanisms,
                                &row.cycles);
      } else {
        const RunResult run = execute(t, kSweepRows, kSweepCols, {}, profile);
        row.mechanisms = run.mechanisms;
        row.cycles = run.cost.cycles;
        row.verdict = run.verdict == Verdict::detected ? TableVerdict::detected
                                                       : TableVerdict::undetected;
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

TableReport reproduce_tables(const TechnologyProfile& profile,
                             const TablePoints& points) {
  require_valid(profile);
  const auto D = TableVerdict::detected;
  const auto U = TableVerdict::undetected;
  const auto N = TableVerdict::no_effect;

  struct TableSpec {
    const char* name;
    DefectKind kind;
    Bit polarity;
    std::vector<std::string> tests;
    const std::vector<double>* resistances;
    std::vector<std::vector<TableVerdict>> expected;
  };
  const TableSpec specs[] = {
      {"I", DefectKind::r1, Bit::zero,
       {"lpr", "march_raw", "iddq", "res"}, &points.r1,
       {{D, D, D, N}, {D, U, U, N}, {U, D, D, N}, {U, U, D, N}}},
      {"II", DefectKind::r2, Bit::zero,
       {"lpr", "march_raw"}, &points.r2,
       {{N, U, D}, {N, D, D}}},
      {"III", DefectKind::r3, Bit::one,
       {"lpr", "march_raw"}, &points.r3,
       {{N, D}, {N, D}}},
  };

  TableReport report;
  report.match = true;
  for (const TableSpec& spec : specs) {
    TableGrid grid;
    grid.name = spec.name;
    grid.kind = spec.kind;
    grid.polarity = spec.polarity;
    grid.tests = spec.tests;
    grid.resistances = *spec.resistances;
    grid.expected = spec.expected;
    grid.match = true;
    for (std::size_t ti = 0; ti < spec.tests.size(); ++ti) {
      const TestProgram test = builtin(spec.tests[ti]);
      std::vector<TableVerdict> row;
      for (const double r : grid.resistances) {
        row.push_back(run_point(spec.kind, spec.polarity, r, test, profile,
                                nullptr, nullptr));
      }
      if (row != grid.expected[ti]) grid.match = false;
      grid.actual.push_back(std::move(row));
    }
    if (!grid.match) report.match = false;
    report.tables.push_back(std::move(grid));
  }
  return report;
}

std::string sweep_to_csv(const SweepReport& r) {
  std::string out = "kind,polarity,resistance_ohms,test,verdict,mechanisms,cycles\n";
  for (const SweepRow& row : r.rows) {
    out += row.kind ? to_string(*row.kind) : "none";
    out += ',';
    if (row.polarity) out += std::to_string(to_int(*row.polarity));
    out += ',';
    out += format_double(row.resistance);
    out += ',';
    out += row.test;
    out += ',';
    out += to_string(row.verdict);
    out += ',';
    out += join_mechanisms(row.mechanisms);
    out += ',';
    out += std::to_string(row.cycles);
    out += '\n';
  }
  return out;
}

SweepReport sweep_from_csv(const std::string& text) {
  SweepReport report;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      if (line != "kind,polarity,resistance_ohms,test,verdict,mechanisms,cycles")
        throw config_error("unexpected sweep CSV header");
      header = false;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 7) throw config_error("sweep CSV row must have 7 fields");
    SweepRow row;
    if (fields[0] != "none") row.kind = defect_kind_from_string(fields[0]);
    if (!fields[1].empty()) row.polarity = bit_of(std::stoi(fields[1]));
    row.resistance = std::strtod(fields[2].c_str(), nullptr);
    row.test = fields[3];
    row.verdict = table_verdict_from_string(fields[4]);
    if (!fields[5].empty())
      for (const auto& m : split(fields[5], ';')) row.mechanisms.insert(mechanism_from_string(m));
    row.cycles = std::stoll(fields[6]);
    report.rows.push_back(std::move(row));
  }
  if (header) throw config_error("sweep CSV is empty");
  return report;
}

std::string sweep_to_json(const SweepReport& r) {
  auto rows = nlohmann::ordered_json::array();
  for (const SweepRow& row : r.rows) {
    nlohmann::ordered_json jr;
    jr["kind"] = row.kind ? nlohmann::ordered_json(to_string(*row.kind))
                          : nlohmann::ordered_json(nullptr);
    jr["polarity"] = row.polarity ? nlohmann::ordered_json(to_int(*row.polarity))
                                  : nlohmann::ordered_json(nullptr);
    jr["resistance_ohms"] = row.resistance;
    jr["test"] = row.test;
    jr["verdict"] = to_string(row.verdict);
    auto mechs = nlohmann::ordered_json::array();
    for (const Mechanism m : row.mechanisms) mechs.push_back(to_string(m));
    jr["mechanisms"] = mechs;
    jr["cycles"] = row.cycles;
    rows.push_back(std::move(jr));
  }
  nlohmann::ordered_json j;
  j["rows"] = rows;
  return j.dump(2);
}

std::string table_report_to_json(const TableReport& r) {
  nlohmann::ordered_json j;
  auto tables = nlohmann::ordered_json::array();
  for (const TableGrid& t : r.tables) {
    nlohmann::ordered_json jt;
    jt["name"] = t.name;
    jt["kind"] = to_string(t.kind);
    jt["polarity"] = to_int(t.polarity);
    jt["tests"] = t.tests;
    jt["resistances"] = t.resistances;
    auto grid_json = [](const std::vector<std::vector<TableVerdict>>& g) {
      auto out = nlohmann::ordered_json::array();
      for (const auto& row : g) {
        auto jrow = nlohmann::ordered_json::array();
        for (const TableVerdict v : row) jrow.push_back(to_string(v));
        out.push_back(std::move(jrow));
      }
      return out;
    };
    jt["expected"] = grid_json(t.expected);
    jt["actual"] = grid_json(t.actual);
    jt["match"] = t.match;
    tables.push_back(std::move(jt));
  }
  j["tables"] = tables;
  j["match"] = r.match;
  return j.dump(2);
}

std::string render_table_report(const TableReport& r) {
  std::ostringstream out;
  for (const TableGrid& t : r.tables) {
    out << "Table " << t.name << " — " << to_string(t.kind) << ", polarity "
        << to_int(t.polarity) << "\n";
    out << "  " << std::string(12, ' ');
    for (const double res : t.resistances) {
      std::string col = format_double(res) + " ohm";
      out << col << std::string(col.size() < 22 ? 22 - col.size() : 1, ' ');
    }
    out << "\n";
    for (std::size_t ti = 0; ti < t.tests.size(); ++ti) {
      out << "  " << t.tests[ti]
          << std::string(t.tests[ti].size() < 12 ? 12 - t.tests[ti].size() : 1, ' ');
      for (std::size_t ri = 0; ri < t.resistances.size(); ++ri) {
        const std::string actual = to_string(t.actual[ti][ri]);
        std::string cell = actual;
        if (t.actual[ti][ri] != t.expected[ti][ri])
          cell += " (expected " + to_string(t.expected[ti][ri]) + ")";
        out << cell << std::string(cell.size() < 22 ? 22 - cell.size() : 1, ' ');
      }
      out << "\n";
    }
    out << "  " << (t.match ? "MATCH" : "MISMATCH") << "\n\n";
  }
  out << (r.match ? "All tables match." : "Table mismatch.") << "\n";
  return out.str();
}

}  // namespace lpsram
