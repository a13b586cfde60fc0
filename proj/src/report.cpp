#include "cgoforge/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgoforge/error.hpp"

namespace cgoforge {

namespace fs = std::filesystem;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

const char* artifact_version() { return "cgoforge " CGOFORGE_VERSION; }

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Non-finite numbers become strings so that the JSON stays valid and lossless.
nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

bool is_complex_column(const Table& t, size_t col) {
  for (const auto& row : t.rows)
    if (std::holds_alternative<std::complex<double>>(row[col])) return true;
  return false;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << content;
  out.close();
  if (!out) throw IoError("error writing '" + p.string() + "'");
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw InputError("table '" + name + "': row has " + std::to_string(row.size()) + " cells, expected " +
                     std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string Table::csv() const {
  std::vector<bool> cplx_col(columns.size());
  std::string out;
  for (size_t c = 0; c < columns.size(); ++c) {
    cplx_col[c] = is_complex_column(*this, c);
    if (c) out += ',';
    out += cplx_col[c] ? csv_field(columns[c] + "_re") + "," + csv_field(columns[c] + "_im") : csv_field(columns[c]);
  }
  out += '\n';
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      const Cell& v = row[c];
      if (cplx_col[c]) {
        std::complex<double> z;
        if (const auto* p = std::get_if<std::complex<double>>(&v))
          z = *p;
        else if (const auto* d = std::get_if<double>(&v))
          z = *d;
        out += format_number(z.real()) + "," + format_number(z.imag());
        continue;
      }
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>)
              out += format_number(x);
            else if constexpr (std::is_same_v<T, long long>)
              out += std::to_string(x);
            else if constexpr (std::is_same_v<T, std::string>)
              out += csv_field(x);
            else if constexpr (std::is_same_v<T, bool>)
              out += x ? "true" : "false";
          },
          v);
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json Table::json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["columns"] = columns;
  auto rows_json = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r;
    for (size_t c = 0; c < row.size(); ++c) {
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>)
              r[columns[c]] = json_number(x);
            else if constexpr (std::is_same_v<T, std::complex<double>>)
              r[columns[c]] = {{"re", json_number(x.real())}, {"im", json_number(x.imag())}};
            else
              r[columns[c]] = x;
          },
          row[c]);
    }
    rows_json.push_back(std::move(r));
  }
  j["rows"] = std::move(rows_json);
  return j;
}

Table& RunReport::table(const std::string& name, std::vector<std::string> columns) {
  tables.emplace_back(name, std::move(columns));
  return tables.back();
}

Check& RunReport::check(const std::string& name, bool pass, double value, const std::string& relation,
                        double threshold, bool blocking) {
  checks.push_back(Check{name, pass, value, relation, threshold, blocking, {}});
  return checks.back();
}

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass || !c.blocking; });
}

nlohmann::ordered_json RunReport::json() const {
  nlohmann::ordered_json j;
  j["version"] = version.empty() ? artifact_version() : version;
  j["subcommand"] = subcommand;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["quick"] = quick;
  j["passed"] = passed();
  auto cs = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    nlohmann::ordered_json x;
    x["name"] = c.name;
    x["pass"] = c.pass;
    x["value"] = json_number(c.value);
    x["relation"] = c.relation;
    x["threshold"] = json_number(c.threshold);
    x["blocking"] = c.blocking;
    if (!c.note.empty()) x["note"] = c.note;
    cs.push_back(std::move(x));
  }
  j["checks"] = std::move(cs);
  auto ts = nlohmann::ordered_json::array();
  for (const Table& t : tables) ts.push_back(t.json());
  j["tables"] = std::move(ts);
  j["notes"] = notes;
  return j;
}

std::vector<std::string> write_report(const RunReport& r, const std::string& dir, double wall_seconds) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::string> written;
  const fs::path base(dir);
  const fs::path json_path = base / (r.subcommand + ".json");
  write_file(json_path, r.json().dump(2) + "\n");
  written.push_back(json_path.string());
  for (const Table& t : r.tables) {
    const fs::path p = base / (r.subcommand + "_" + t.name + ".csv");
    write_file(p, t.csv());
    written.push_back(p.string());
  }
  nlohmann::ordered_json timing;
  timing["subcommand"] = r.subcommand;
  timing["wall_seconds"] = wall_seconds;
  const fs::path tp = base / (r.subcommand + ".timing.json");
  write_file(tp, timing.dump(2) + "\n");
  written.push_back(tp.string());
  return written;
}

Summary summarize_reports(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("report directory '" + dir + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const fs::path& p = entry.path();
    const std::string name = p.filename().string();
    if (!entry.is_regular_file() || p.extension() != ".json") continue;
    if (name == "summary.json" || name.ends_with(".timing.json")) continue;
    files.push_back(p);
  }
  if (ec) throw IoError("cannot list '" + dir + "': " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

  Summary s;
  s.csv = "file,subcommand,config_hash,check,pass,value,relation,threshold,blocking\n";
  auto reports = nlohmann::ordered_json::array();
  for (const fs::path& p : files) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(p));
    } catch (const nlohmann::json::exception& e) {
      throw IoError("'" + p.string() + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("subcommand") || !j.contains("checks") || !j["checks"].is_array())
      throw IoError("'" + p.string() + "' is not a run report");
    const std::string file = p.filename().string();
    int failed = 0;
    for (const auto& c : j["checks"]) {
      const bool pass = c.value("pass", false), blocking = c.value("blocking", true);
      if (!pass && blocking) ++failed;
      const auto num = [&](const char* k) {
        const auto& v = c.at(k);
        return v.is_number() ? format_number(v.get<double>()) : v.get<std::string>();
      };
      s.csv += csv_field(file) + "," + csv_field(j["subcommand"].get<std::string>()) + "," +
               csv_field(j.value("config_hash", "")) + "," + csv_field(c.value("name", "")) + "," +
               (pass ? "true" : "false") + "," + num("value") + "," + csv_field(c.value("relation", "")) + "," +
               num("threshold") + "," + (blocking ? "true" : "false") + "\n";
    }
    nlohmann::ordered_json r;
    r["file"] = file;
    r["subcommand"] = j["subcommand"];
    r["config_hash"] = j.value("config_hash", "");
    r["checks"] = j["checks"].size();
    r["failed"] = failed;
    r["passed"] = failed == 0;
    reports.push_back(std::move(r));
    s.passed = s.passed && failed == 0;
    ++s.reports;
  }
  s.json["version"] = artifact_version();
  s.json["passed"] = s.passed;
  s.json["reports"] = std::move(reports);
  return s;
}

Summary write_summary(const std::string& dir) {
  Summary s = summarize_reports(dir);
  write_file(fs::path(dir) / "summary.json", s.json.dump(2) + "\n");
  write_file(fs::path(dir) / "summary.csv", s.csv);
  return s;
}

}  // namespace cgoforge
