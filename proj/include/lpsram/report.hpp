#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lpsram/engine.hpp"

namespace lpsram {

// "No Effect" is reported when a defect is present but classifies to an
// empty behavior set; it is distinct from an active defect the test missed.
enum class TableVerdict { detected, undetected, no_effect };

std::string to_string(TableVerdict v);
TableVerdict table_verdict_from_string(const std::string& s);

struct SweepRow {
  std::optional<DefectKind> kind;  // empty = fault-free run
  std::optional<Bit> polarity;
  double resistance = 0.0;
  std::string test;
  TableVerdict verdict = TableVerdict::undetected;
  std::set<Mechanism> mechanisms;
  std::int64_t cycles = 0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
};

// Log-spaced grid from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

// Runs every test at every resistance on a 4x4 array with the defect at
// (1,1): small enough to reason about, wide enough for word-line stress.
// Passing no kind sweeps a fault-free array.
SweepReport sweep(std::optional<DefectKind> kind, Bit polarity,
                  const std::vector<double>& grid,
                  const std::vector<TestProgram>& tests,
                  const TechnologyProfile& profile);

// Representative resistances per behavior range, one per coverage-table
// column. The R1 mid range gets one point outside and one inside the RES
// sub-range.
struct TablePoints {
  std::vector<double> r1{10e3, 22e3, 30e3, 100e3};
  std::vector<double> r2{1e6, 5e6, 20e6};
  std::vector<double> r3{10e3, 100e3};
};

struct TableGrid {
  std::string name;  // "I", "II", "III"
  DefectKind kind = DefectKind::r1;
  Bit polarity = Bit::zero;
  std::vector<std::string> tests;
  std::vector<double> resistances;
  std::vector<std::vector<TableVerdict>> expected;  // [test][resistance]
  std::vector<std::vector<TableVerdict>> actual;
  bool match = false;
};

struct TableReport {
  std::vector<TableGrid> tables;
  bool match = false;
};

// Reproduces the three defect-coverage tables and compares them cell by
// cell against the published verdicts.
TableReport reproduce_tables(const TechnologyProfile& profile,
                             const TablePoints& points = {});

// CSV schema: kind,polarity,resistance_ohms,test,verdict,mechanisms,cycles.
// Mechanisms are ';'-joined. Numbers are locale-independent.
std::string sweep_to_csv(const SweepReport& r);
SweepReport sweep_from_csv(const std::string& text);
std::string sweep_to_json(const SweepReport& r);

std::string table_report_to_json(const TableReport& r);
std::string render_table_report(const TableReport& r);

}  // namespace lpsram
