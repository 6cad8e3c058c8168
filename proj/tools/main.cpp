#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lpsram/engine.hpp"
#include "lpsram/errors.hpp"
#include "lpsram/report.hpp"

namespace {

using namespace lpsram;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw config_error("write to '" + path + "' failed");
}

TechnologyProfile load_profile(const std::string& path) {
  if (path.empty()) return TechnologyProfile{};
  TechnologyProfile p = profile_from_json(read_file(path));
  require_valid(p);
  return p;
}

TestProgram resolve_test(const std::string& spec) {
  if (is_builtin(spec)) return builtin(spec);
  std::ifstream probe(spec);
  if (!probe) throw config_error("unknown test '" + spec + "' (not a builtin, not a readable file)");
  probe.close();
  return parse_program(read_file(spec), spec);
}

// KIND:POL:OHMS:ROW,COL with KIND any of the R1..R10 placements.
Defect parse_defect_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (const char c : spec) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4)
    throw config_error("defect spec must be KIND:POL:OHMS:ROW,COL (got '" + spec + "')");
  const CanonicalDefect canon = canonicalize(parts[0]);
  Defect d;
  d.kind = canon.kind;
  if (parts[1] == "0") d.vulnerable = Bit::zero;
  else if (parts[1] == "1") d.vulnerable = Bit::one;
  else throw config_error("defect polarity must be 0 or 1 (got '" + parts[1] + "')");
  char* end = nullptr;
  d.resistance = std::strtod(parts[2].c_str(), &end);
  if (end == parts[2].c_str() || *end != '\0' || !(d.resistance > 0))
    throw config_error("defect resistance must be a positive number (got '" + parts[2] + "')");
  const auto comma = parts[3].find(',');
  if (comma == std::string::npos)
    throw config_error("defect location must be ROW,COL (got '" + parts[3] + "')");
  try {
    d.location.row = std::stoi(parts[3].substr(0, comma));
    d.location.col = std::stoi(parts[3].substr(comma + 1));
  } catch (const std::exception&) {
    throw config_error("defect location must be ROW,COL (got '" + parts[3] + "')");
  }
  return d;
}

int cmd_run(const std::string& test_spec, int rows, int cols,
            const std::vector<std::string>& defect_specs,
            const std::string& profile_path, bool json, bool failures_only) {
  const TechnologyProfile profile = load_profile(profile_path);
  const TestProgram program = resolve_test(test_spec);
  std::vector<Defect> defects;
  for (const auto& s : defect_specs) defects.push_back(parse_defect_spec(s));

  const RunResult result = execute(program, rows, cols, defects, profile);
  if (json) {
    std::cout << run_result_to_json(result, failures_only) << "\n";
    return 0;
  }
  std::cout << "test: " << program.name << "  array: " << rows << "x" << cols
            << "  verdict: " << to_string(result.verdict) << "\n";
  std::string mechs;
  for (const Mechanism m : result.mechanisms) {
    if (!mechs.empty()) mechs += ", ";
    mechs += to_string(m);
  }
  std::cout << "mechanisms: " << (mechs.empty() ? "-" : mechs) << "\n";
  std::cout << "cost: " << result.cost.cycles << " cycles (" << result.cost.op_count
            << " ops, " << result.cost.lpm_dwells << " lpm dwells, "
            << result.cost.iddq_measures << " iddq measures)\n";
  std::size_t failures = 0;
  for (const Observation& o : result.observations)
    if (!o.pass) ++failures;
  std::cout << "failing observations: " << failures << "\n";
  for (const Observation& o : result.observations) {
    if (o.pass) continue;
    std::cout << "  cycle " << o.cycle << "  " << phase_label(o);
    if (o.addr) std::cout << " @ " << to_string(*o.addr);
    std::cout << "  expected " << o.expected << ", got " << o.got << "\n";
  }
  for (const auto& w : result.warnings) std::cout << "warning: " << w << "\n";
  return 0;
}

int cmd_sweep(const std::string& defect_spec, const std::string& grid_spec,
              const std::string& tests_spec, const std::string& profile_path,
              const std::string& csv_path, bool json) {
  const TechnologyProfile profile = load_profile(profile_path);

  std::optional<DefectKind> kind;
  Bit polarity = Bit::zero;
  if (!defect_spec.empty()) {
    const auto colon = defect_spec.find(':');
    if (colon == std::string::npos)
      throw config_error("sweep defect must be KIND:POL (got '" + defect_spec + "')");
    const CanonicalDefect canon = canonicalize(defect_spec.substr(0, colon));
    kind = canon.kind;
    const std::string pol = defect_spec.substr(colon + 1);
    if (pol == "0") polarity = Bit::zero;
    else if (pol == "1") polarity = Bit::one;
    else throw config_error("sweep polarity must be 0 or 1 (got '" + pol + "')");
  }

  std::vector<std::string> grid_parts;
  {
    std::string cur;
    for (const char c : grid_spec) {
      if (c == ':') {
        grid_parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    grid_parts.push_back(cur);
  }
  if (grid_parts.size() != 3) throw config_error("grid must be LO:HI:POINTS");
  double lo = 0, hi = 0;
  int points = 0;
  try {
    lo = std::stod(grid_parts[0]);
    hi = std::stod(grid_parts[1]);
    points = std::stoi(grid_parts[2]);
  } catch (const std::exception&) {
    throw config_error("grid must be LO:HI:POINTS with numeric fields");
  }

  std::vector<TestProgram> tests;
  std::string cur;
  for (const char c : tests_spec + ",") {
    if (c == ',') {
      if (!cur.empty()) tests.push_back(resolve_test(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (tests.empty()) throw config_error("no tests given");

  const SweepReport report = sweep(kind, polarity, log_grid(lo, hi, points), tests, profile);
  const std::string payload = json ? sweep_to_json(report) : sweep_to_csv(report);
  if (csv_path.empty())
    std::cout << payload;
  else
    write_file(csv_path, payload);
  return 0;
}

int cmd_tables(const std::string& profile_path, bool json) {
  const TechnologyProfile profile = load_profile(profile_path);
  const TableReport report = reproduce_tables(profile);
  std::cout << (json ? table_report_to_json(report) + "\n" : render_table_report(report));
  return report.match ? 0 : 1;
}

int cmd_parse(const std::string& path) {
  const TestProgram p = parse_program(read_file(path), path);
  std::cout << format_program(p) << "\n";
  return 0;
}

int cmd_list_tests() {
  for (const auto& name : builtin_names())
    std::cout << name << "\t" << format_program(builtin(name)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavioral simulator for resistive defects in low-power SRAM arrays"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one test against an array with injected defects");
  std::string run_test, run_profile;
  int run_rows = 0, run_cols = 0;
  std::vector<std::string> run_defects;
  bool run_json = false, run_failures_only = false;
  run->add_option("--test", run_test, "Builtin test name or .march file")->required();
  run->add_option("--rows", run_rows, "Array rows")->required();
  run->add_option("--cols", run_cols, "Array columns")->required();
  run->add_option("--defect", run_defects, "KIND:POL:OHMS:ROW,COL (repeatable)");
  run->add_option("--profile", run_profile, "Technology profile JSON file");
  run->add_flag("--json", run_json, "Emit the full run result as JSON");
  run->add_flag("--failures-only", run_failures_only, "With --json, keep only failing observations");

  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep a defect over a resistance grid");
  std::string sweep_defect, sweep_grid, sweep_tests, sweep_profile, sweep_csv;
  bool sweep_json = false;
  sweep_cmd->add_option("--defect", sweep_defect, "KIND:POL (omit for a fault-free sweep)");
  sweep_cmd->add_option("--grid", sweep_grid, "LO:HI:POINTS, log spaced")->required();
  sweep_cmd->add_option("--tests", sweep_tests, "Comma-separated test names/files")->required();
  sweep_cmd->add_option("--profile", sweep_profile, "Technology profile JSON file");
  sweep_cmd->add_option("--csv", sweep_csv, "Write the report to this file instead of stdout");
  sweep_cmd->add_flag("--json", sweep_json, "Emit JSON instead of CSV");

  auto* tables = app.add_subcommand("tables", "Reproduce the defect-coverage tables and compare");
  std::string tables_profile;
  bool tables_json = false;
  tables->add_option("--profile", tables_profile, "Technology profile JSON file");
  tables->add_flag("--json", tables_json, "Emit the table report as JSON");

  auto* parse = app.add_subcommand("parse", "Parse a test file and print its canonical form");
  std::string parse_file;
  parse->add_option("--file", parse_file, "Test program file")->required();

  app.add_subcommand("list-tests", "List the builtin tests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand("run"))
      return cmd_run(run_test, run_rows, run_cols, run_defects, run_profile,
                     run_json, run_failures_only);
    if (app.got_subcommand("sweep"))
      return cmd_sweep(sweep_defect, sweep_grid, sweep_tests, sweep_profile,
                       sweep_csv, sweep_json);
    if (app.got_subcommand("tables")) return cmd_tables(tables_profile, tables_json);
    if (app.got_subcommand("parse")) return cmd_parse(parse_file);
    if (app.got_subcommand("list-tests")) return cmd_list_tests();
  } catch (const lpsram::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
