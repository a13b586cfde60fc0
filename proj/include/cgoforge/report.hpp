#pragma once
// Run reports: tables of per-case metrics plus pass/fail checks, written as
// <subcommand>.json, <subcommand>_<table>.csv and a wall-time sidecar
// <subcommand>.timing.json (kept out of the report so reruns are byte-identical).

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace cgoforge {

using Cell = std::variant<double, long long, std::string, bool, std::complex<double>>;

struct Table {
  std::string name;
  std::vector<std::string> columns;  // complex cells expand to <column>_re, <column>_im
  std::vector<std::vector<Cell>> rows;

  Table(std::string n, std::vector<std::string> cols) : name(std::move(n)), columns(std::move(cols)) {}
  void add(std::vector<Cell> row);  // InputError on a width mismatch
  // CSV: comma-separated, '.' decimals, header row, LF endings.
  std::string csv() const;
  nlohmann::ordered_json json() const;
};

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string relation;  // "<=", ">=", "in [a, b]", ...
  double threshold = 0.0;
  bool blocking = true;  // non-blocking checks are reported but do not fail the run
  std::string note;
};

struct RunReport {
  std::string subcommand;
  std::string version;
  std::string config_hash;
  unsigned long long seed = 42;
  bool quick = false;
  std::vector<Table> tables;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  Table& table(const std::string& name, std::vector<std::string> columns);
  Check& check(const std::string& name, bool pass, double value, const std::string& relation, double threshold,
               bool blocking = true);
  bool passed() const;  // all blocking checks pass
  nlohmann::ordered_json json() const;
};

const char* artifact_version();  // "cgoforge <version>"

// Creates `dir` as needed; IoError on failure. Returns the paths written (JSON first).
std::vector<std::string> write_report(const RunReport& r, const std::string& dir, double wall_seconds);

struct Summary {
  nlohmann::ordered_json json;
  std::string csv;
  bool passed = true;
  int reports = 0;
};
// Consolidates every <subcommand>.json report in `dir` (sorted by file name).
Summary summarize_reports(const std::string& dir);
// Writes summary.json and summary.csv into `dir`.
Summary write_summary(const std::string& dir);

// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace cgoforge
