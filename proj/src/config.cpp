#include "cgoforge/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace cgoforge {

ConfigError::ConfigError(const std::string& key, const std::string& message, int line)
    : InputError((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + key + ": " + message),
      key_(key),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    const size_t at = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

bool is_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::string section;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("[" + std::string(line.substr(1)), "unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!is_name(section)) throw ConfigError("[" + section + "]", "invalid section name", line_no);
      if (doc.sections.count(section)) throw ConfigError("[" + section + "]", "duplicate section", line_no);
      doc.sections[section];
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(section.empty() ? "(top level)" : section, "expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string full = section + "." + key;
    if (section.empty()) throw ConfigError(key, "key outside of any [section]", line_no);
    if (!is_name(key)) throw ConfigError(full, "invalid key name", line_no);
    auto& sec = doc.sections[section];
    if (sec.count(key)) throw ConfigError(full, "duplicate key", line_no);
    sec[key] = ConfigEntry{std::string(trim(line.substr(eq + 1))), line_no};
  }
  return doc;
}

namespace {

// ---- value codecs ----------------------------------------------------------

struct Ctx {
  std::string key;
  int line;
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(key, msg, line); }
};

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double num(const Ctx& c, std::string_view s) {
  s = trim(s);
  double v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto r = std::from_chars(b, e, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != e || !std::isfinite(v))
    c.fail("expected a finite number, got '" + std::string(s) + "'");
  return v;
}

int integer(const Ctx& c, std::string_view s) {
  s = trim(s);
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    c.fail("expected an integer, got '" + std::string(s) + "'");
  return v;
}

bool boolean(const Ctx& c, std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  c.fail("expected true or false, got '" + std::string(s) + "'");
}

std::vector<double> nums(const Ctx& c, std::string_view s) {
  if (trim(s).empty()) return {};
  std::vector<double> out;
  for (const auto& t : split(s, ',')) out.push_back(num(c, t));
  return out;
}

std::vector<int> ints(const Ctx& c, std::string_view s) {
  if (trim(s).empty()) return {};
  std::vector<int> out;
  for (const auto& t : split(s, ',')) out.push_back(integer(c, t));
  return out;
}

RVec vec3(const Ctx& c, std::string_view s) {
  const auto v = nums(c, s);
  if (v.size() == 1) return RVec::Constant(3, v[0]);
  if (v.size() != 3) c.fail("expected 1 or 3 numbers, got " + std::to_string(v.size()));
  return Eigen::Map<const RVec>(v.data(), 3);
}

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

template <class T>
std::string fmt_list(const std::vector<T>& v) {
  std::vector<std::string> s;
  for (const T& x : v) {
    if constexpr (std::is_same_v<T, int>)
      s.push_back(std::to_string(x));
    else
      s.push_back(fmt(x));
  }
  return join(s);
}

std::string fmt_vec(const RVec& v) { return fmt_list(std::vector<double>(v.data(), v.data() + v.size())); }

ExprField expression(const Ctx& c, std::string_view s) {
  try {
    return ExprField{parse_expr(s)};
  } catch (const ParseError& e) {
    c.fail(std::string("invalid expression: ") + e.what());
  }
}

ExprField const_expr(const char* s) { return ExprField{parse_expr(s)}; }

// ---- schema ----------------------------------------------------------------

struct Key {
  const char* name;
  std::function<void(ExperimentConfig&, const Ctx&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
  bool required = false;
};

struct Section {
  const char* name;
  std::vector<Key> keys;
};

#define CFG_NUM(name, member) \
  Key{name, [](ExperimentConfig& c, const Ctx& x, const std::string& v) { c.member = num(x, v); }, \
      [](const ExperimentConfig& c) { return fmt(c.member); }}
#define CFG_INT(name, member) \
  Key{name, [](ExperimentConfig& c, const Ctx& x, const std::string& v) { c.member = integer(x, v); }, \
      [](const ExperimentConfig& c) { return std::to_string(c.member); }}
#define CFG_BOOL(name, member) \
  Key{name, [](ExperimentConfig& c, const Ctx& x, const std::string& v) { c.member = boolean(x, v); }, \
      [](const ExperimentConfig& c) { return std::string(c.member ? "true" : "false"); }}
#define CFG_NUMS(name, member) \
  Key{name, [](ExperimentConfig& c, const Ctx& x, const std::string& v) { c.member = nums(x, v); }, \
      [](const ExperimentConfig& c) { return fmt_list(c.member); }}
#define CFG_INTS(name, member) \
  Key{name, [](ExperimentConfig& c, const Ctx& x, const std::string& v) { c.member = ints(x, v); }, \
      [](const ExperimentConfig& c) { return fmt_list(c.member); }}
#define CFG_VEC(name, member) \
  Key{name, [](ExperimentConfig& c, const Ctx& x, const std::string& v) { c.member = vec3(x, v); }, \
      [](const ExperimentConfig& c) { return fmt_vec(c.member); }}
#define CFG_EXPR(name, member) \
  Key{name, [](ExperimentConfig& c, const Ctx& x, const std::string& v) { c.member = expression(x, v); }, \
      [](const ExperimentConfig& c) { return c.member.text(); }}
#define CFG_PAIR(name, member)                                                         \
  Key{name,                                                                            \
      [](ExperimentConfig& c, const Ctx& x, const std::string& v) {                    \
        const auto p = nums(x, v);                                                     \
        if (p.size() != 2) x.fail("expected 2 numbers, got " + std::to_string(p.size())); \
        c.member = {p[0], p[1]};                                                       \
      },                                                                               \
      [](const ExperimentConfig& c) { return fmt(c.member.first) + ", " + fmt(c.member.second); }}

Key required(Key k) {
  k.required = true;
  return k;
}

const char* family_name(PotentialFamily f) {
  switch (f) {
    case PotentialFamily::Zero: return "zero";
    case PotentialFamily::GaussianYangMills: return "gaussian_yang_mills";
    case PotentialFamily::Scalar: return "scalar";
  }
  return "";
}

const std::vector<Section>& schema() {
  static const std::vector<Section> s = {
      {"grid", {required(CFG_INT("points", grid.points)), CFG_NUM("period", grid.period)}},
      {"domain", {CFG_VEC("lo", domain.lo), CFG_VEC("hi", domain.hi), CFG_PAIR("margins", domain.margins)}},
      {"frame",
       {CFG_VEC("mu", frame.mu), CFG_VEC("nu", frame.nu), CFG_VEC("l", frame.l), required(CFG_NUMS("tau", frame.tau)),
        CFG_NUMS("phase_angles", frame.phase_angles)}},
      {"potential",
       {Key{"family",
            [](ExperimentConfig& c, const Ctx& x, const std::string& v) {
              if (v == "zero")
                c.potential.family = PotentialFamily::Zero;
              else if (v == "gaussian_yang_mills")
                c.potential.family = PotentialFamily::GaussianYangMills;
              else if (v == "scalar")
                c.potential.family = PotentialFamily::Scalar;
              else
                x.fail("expected zero, gaussian_yang_mills or scalar, got '" + v + "'");
            },
            [](const ExperimentConfig& c) { return std::string(family_name(c.potential.family)); }},
        CFG_INT("m", potential.m), CFG_VEC("center", potential.center), CFG_NUM("sigma", potential.sigma),
        CFG_NUM("amplitude", potential.amplitude), CFG_NUM("amplitude_b", potential.amplitude_b),
        CFG_EXPR("a1", potential.a[0]), CFG_EXPR("a2", potential.a[1]), CFG_EXPR("a3", potential.a[2])}},
      {"expansion",
       {CFG_INT("order", expansion.order), CFG_INT("max_order", expansion.max_order),
        Key{"p",
            [](ExperimentConfig& c, const Ctx& x, const std::string& v) {
              c.expansion.p.clear();
              for (const auto& comp : split(v, ';')) c.expansion.p.push_back(nums(x, comp));
            },
            [](const ExperimentConfig& c) {
              std::vector<std::string> parts;
              for (const auto& comp : c.expansion.p) parts.push_back(fmt_list(comp));
              return join(parts, "; ");
            }},
        CFG_BOOL("corrector", expansion.corrector), CFG_NUMS("corrector_tau", expansion.corrector_tau),
        CFG_BOOL("corrector_krylov", expansion.corrector_krylov),
        CFG_INT("corrector_max_iter", expansion.corrector_max_iter)}},
      {"gauge",
       {CFG_EXPR("phase", gauge.phase), CFG_EXPR("control_phase", gauge.control_phase),
        Key{"hermitian",
            [](ExperimentConfig& c, const Ctx& x, const std::string& v) {
              const auto rows = split(v, ';');
              if (rows.size() != 2) x.fail("expected a 2 x 2 matrix 'a, b; c, d'");
              for (int i = 0; i < 2; ++i) {
                const auto r = nums(x, rows[i]);
                if (r.size() != 2) x.fail("expected a 2 x 2 matrix 'a, b; c, d'");
                c.gauge.hermitian(i, 0) = r[0];
                c.gauge.hermitian(i, 1) = r[1];
              }
            },
            [](const ExperimentConfig& c) {
              const auto& h = c.gauge.hermitian;
              return fmt(h(0, 0)) + ", " + fmt(h(0, 1)) + "; " + fmt(h(1, 0)) + ", " + fmt(h(1, 1));
            }},
        CFG_VEC("box_lo", gauge.box_lo), CFG_VEC("box_hi", gauge.box_hi), CFG_INTS("cells", gauge.cells), CFG_INT("fine_points", gauge.fine_points), CFG_INT("collar", gauge.collar)}},
      {"lame",
       {Key{"family",
            [](ExperimentConfig& c, const Ctx& x, const std::string& v) {
              if (v == "bump")
                c.lame.family = LameFamily::Bump;
              else if (v == "expression")
                c.lame.family = LameFamily::Expression;
              else
                x.fail("expected bump or expression, got '" + v + "'");
            },
            [](const ExperimentConfig& c) {
              return std::string(c.lame.family == LameFamily::Bump ? "bump" : "expression");
            }},
        CFG_EXPR("lambda1", lame.lambda1), CFG_EXPR("mu1", lame.mu1), CFG_EXPR("lambda2", lame.lambda2),
        CFG_EXPR("mu2", lame.mu2), CFG_VEC("bump_center", lame.bump_center), CFG_NUM("bump_radius", lame.bump_radius),
        CFG_NUM("bump_lambda", lame.bump_lambda), CFG_NUM("bump_mu", lame.bump_mu)}},
      {"elastic",
       {CFG_VEC("omega_lo", elastic.omega_lo), CFG_VEC("omega_hi", elastic.omega_hi),
        CFG_PAIR("margins", elastic.margins), CFG_VEC("l", elastic.l), CFG_NUMS("p", elastic.p),
        CFG_NUMS("tau", elastic.tau), CFG_INT("order", elastic.order), CFG_INT("coefficients", elastic.coefficients),
        CFG_NUMS("quartic_lnorms", elastic.quartic_lnorms), CFG_NUMS("quartic_tau", elastic.quartic_tau),
        CFG_NUMS("quartic_pair", elastic.quartic_pair), CFG_INTS("green_cells", elastic.green_cells),
        CFG_NUM("green_radius", elastic.green_radius), CFG_NUM("green_lambda", elastic.green_lambda),
        CFG_NUM("green_mu", elastic.green_mu)}},
      {"identity",
       {CFG_INT("theta_samples", identity.theta_samples), CFG_INT("check_samples", identity.check_samples),
        CFG_NUMS("alphas", identity.alphas)}},
      {"tolerances",
       {CFG_NUM("transport", tolerances.transport), CFG_NUM("min_det", tolerances.min_det),
        CFG_NUM("phase", tolerances.phase), CFG_NUM("free_exact", tolerances.free_exact),
        CFG_NUM("slope", tolerances.slope), CFG_NUM("leading_slope", tolerances.leading_slope),
        CFG_PAIR("gauge_ratio", tolerances.gauge_ratio), CFG_NUM("green_factor", tolerances.green_factor),
        CFG_NUM("h2_relative", tolerances.h2_relative), CFG_NUM("quartic_relative", tolerances.quartic_relative),
        CFG_NUM("identity_equal", tolerances.identity_equal),
        CFG_NUM("identity_reconstruction", tolerances.identity_reconstruction)}},
      {"output",
       {Key{"dir",
            [](ExperimentConfig& c, const Ctx& x, const std::string& v) {
              if (v.empty()) x.fail("must not be empty");
              c.output_dir = v;
            },
            [](const ExperimentConfig& c) { return c.output_dir; }}}},
  };
  return s;
}

// ---- validation ------------------------------------------------------------

void require(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) throw ConfigError(key, msg);
}

void positive_list(const std::vector<double>& v, const std::string& key, size_t min_size) {
  require(v.size() >= min_size, key, "needs at least " + std::to_string(min_size) + " entries");
  for (double t : v) require(t > 0, key, "entries must be positive");
  for (size_t i = 1; i < v.size(); ++i) require(v[i] > v[i - 1], key, "entries must be strictly increasing");
}

void box_check(const RVec& lo, const RVec& hi, double period, const std::string& key) {
  for (int k = 0; k < 3; ++k) {
    require(lo[k] < hi[k], key + "_lo", "must be below " + key + "_hi componentwise");
    require(lo[k] > 0 && hi[k] < period, key + "_lo", "box must lie inside (0, grid.period)");
  }
}

bool unit(const RVec& v) { return std::abs(v.norm() - 1.0) <= 1e-12; }

void constant_positive(const ExprField& e, const std::string& key) {
  if (!expr_is_constant(e.expr)) return;
  double v = 0;
  try {
    v = evaluate(e.expr, 0, 0, 0);
  } catch (const InputError& err) {
    throw ConfigError(key, err.what());
  }
  require(v > 0, key, "must be positive");
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
  potential.a = {const_expr("0"), const_expr("0"), const_expr("0")};
  gauge.phase = const_expr("1.5*gaussian(2, 2, 2, 0.25)");
  gauge.control_phase = const_expr("1.5*gaussian(1, 2, 2, 0.35)");
  gauge.hermitian << 1.0, 0.4, 0.4, -0.5;
  lame.lambda1 = const_expr("1");
  lame.mu1 = const_expr("1");
  lame.lambda2 = const_expr("1");
  lame.mu2 = const_expr("1");
}

void validate_config(const ExperimentConfig& c) {
  require(c.grid.points >= 8 && c.grid.points % 2 == 0, "grid.points", "must be an even integer >= 8");
  require(c.grid.period > 0, "grid.period", "must be positive");
  for (int k = 0; k < 3; ++k) {
    require(c.domain.lo[k] < c.domain.hi[k], "domain.lo", "must be below domain.hi componentwise");
    require(c.domain.lo[k] - c.domain.margins.second > 0 && c.domain.hi[k] + c.domain.margins.second < c.grid.period,
            "domain.margins", "outer cutoff must fit inside (0, grid.period)");
  }
  require(c.domain.margins.first > 0 && c.domain.margins.second > c.domain.margins.first, "domain.margins",
          "need 0 < inner < outer");

  const auto& f = c.frame;
  require(unit(f.mu), "frame.mu", "must be a unit vector");
  require(unit(f.nu), "frame.nu", "must be a unit vector");
  require(std::abs(f.mu.dot(f.nu)) <= 1e-12, "frame.nu", "must be orthogonal to frame.mu");
  require(std::abs(f.mu.dot(f.l)) <= 1e-12 && std::abs(f.nu.dot(f.l)) <= 1e-12, "frame.l",
          "must be orthogonal to frame.mu and frame.nu");
  positive_list(f.tau, "frame.tau", 1);
  for (double t : f.tau)
    require(t > 0.5 * f.l.norm(), "frame.tau", "every tau must exceed |l|/2 = " + fmt(0.5 * f.l.norm()));

  const auto& p = c.potential;
  require(p.sigma > 0, "potential.sigma", "must be positive");
  require(p.m >= 1 && p.m <= 8, "potential.m", "must be in 1..8");
  require(p.family != PotentialFamily::GaussianYangMills || p.m == 2, "potential.m",
          "gaussian_yang_mills is a 2 x 2 family; m must be 2");

  const auto& e = c.expansion;
  require(e.max_order >= 0, "expansion.max_order", "must be non-negative");
  require(e.order >= 0, "expansion.order", "must be non-negative");
  require(e.order <= e.max_order, "expansion.order",
          "order " + std::to_string(e.order) + " exceeds expansion.max_order = " + std::to_string(e.max_order));
  require(static_cast<int>(e.p.size()) == p.m, "expansion.p", "needs one component per row of the potential (m)");
  for (const auto& comp : e.p) {
    require(!comp.empty(), "expansion.p", "empty component");
    require(static_cast<int>(comp.size()) <= 5, "expansion.p", "degree must not exceed 4");
  }
  positive_list(e.corrector_tau, "expansion.corrector_tau", 2);
  for (double t : e.corrector_tau) require(t > 0.5 * f.l.norm(), "expansion.corrector_tau", "every tau must exceed |l|/2");
  require(e.corrector_max_iter > 0, "expansion.corrector_max_iter", "must be positive");

  const auto& g = c.gauge;
  require(std::abs(g.hermitian(0, 1) - g.hermitian(1, 0)) <= 0.0, "gauge.hermitian", "must be symmetric");
  box_check(g.box_lo, g.box_hi, c.grid.period, "gauge.box");
  require(g.cells.size() >= 2, "gauge.cells", "needs at least 2 refinement levels");
  for (size_t i = 0; i < g.cells.size(); ++i) {
    require(g.cells[i] >= 4, "gauge.cells", "levels need at least 4 cells");
    require(i == 0 || g.cells[i] > g.cells[i - 1], "gauge.cells", "must be strictly increasing");
  }
  require(g.fine_points >= 16 && g.fine_points % 2 == 0, "gauge.fine_points", "must be an even integer >= 16");
  require(g.collar >= 0, "gauge.collar", "must be non-negative");

  const auto& l = c.lame;
  constant_positive(l.mu1, "lame.mu1");
  if (l.family == LameFamily::Expression) constant_positive(l.mu2, "lame.mu2");
  require(l.bump_radius > 0, "lame.bump_radius", "must be positive");

  const auto& el = c.elastic;
  box_check(el.omega_lo, el.omega_hi, c.grid.period, "elastic.omega");
  require(el.margins.first > 0 && el.margins.second > el.margins.first, "elastic.margins", "need 0 < inner < outer");
  require(el.p.size() == 4, "elastic.p", "needs 4 entries (r, s)");
  require(el.coefficients >= 1, "elastic.coefficients", "must be positive");
  require(el.order >= 0 && el.order <= e.max_order, "elastic.order", "must be in 0..expansion.max_order");
  positive_list(el.tau, "elastic.tau", static_cast<size_t>(el.coefficients) + 2);
  for (double t : el.tau) require(t > 0.5 * el.l.norm(), "elastic.tau", "every tau must exceed |l|/2");
  require(el.l.norm() > 0, "elastic.l", "must be nonzero");
  positive_list(el.quartic_lnorms, "elastic.quartic_lnorms", 2);
  positive_list(el.quartic_tau, "elastic.quartic_tau", static_cast<size_t>(el.coefficients) + 2);
  for (double t : el.quartic_tau)
    require(t > 0.5 * el.quartic_lnorms.back(), "elastic.quartic_tau", "every tau must exceed max |l|/2");
  require(el.quartic_pair.size() == 4, "elastic.quartic_pair", "needs lambda1, mu1, lambda2, mu2");
  require(el.quartic_pair[1] > 0 && el.quartic_pair[3] > 0, "elastic.quartic_pair", "mu entries must be positive");
  require(el.green_cells.size() >= 2, "elastic.green_cells", "needs at least 2 refinement levels");
  for (size_t i = 0; i < el.green_cells.size(); ++i)
    require(el.green_cells[i] >= 4 && (i == 0 || el.green_cells[i] > el.green_cells[i - 1]), "elastic.green_cells",
            "must be strictly increasing, >= 4");
  require(el.green_radius > 0, "elastic.green_radius", "must be positive");

  const auto& id = c.identity;
  require(id.theta_samples >= 5, "identity.theta_samples", "at least 5 theta samples are needed for 5 components");
  require(id.check_samples >= 0, "identity.check_samples", "must be non-negative");
  require(!id.alphas.empty(), "identity.alphas", "needs at least one weight");
  for (double a : id.alphas) require(a > 0, "identity.alphas", "must be positive");

  const auto& t = c.tolerances;
  for (double v : {t.transport, t.min_det, t.phase, t.free_exact, t.slope, t.leading_slope, t.green_factor,
                   t.h2_relative, t.quartic_relative, t.identity_equal, t.identity_reconstruction})
    require(v > 0, "tolerances", "all tolerances must be positive");
  require(t.gauge_ratio.first > 0 && t.gauge_ratio.first < t.gauge_ratio.second, "tolerances.gauge_ratio",
          "needs 0 < lo < hi");
}

ExperimentConfig parse_config(std::string_view text) {
  const ConfigDocument doc = ConfigDocument::parse(text);
  ExperimentConfig c;
  std::set<std::string> known_sections;
  for (const Section& sec : schema()) {
    known_sections.insert(sec.name);
    const auto it = doc.sections.find(sec.name);
    std::set<std::string> known;
    for (const Key& k : sec.keys) {
      known.insert(k.name);
      const std::string full = std::string(sec.name) + "." + k.name;
      const ConfigEntry* entry = nullptr;
      if (it != doc.sections.end()) {
        const auto kt = it->second.find(k.name);
        if (kt != it->second.end()) entry = &kt->second;
      }
      if (!entry) {
        if (k.required) throw ConfigError(full, "missing required key");
        continue;
      }
      k.set(c, Ctx{full, entry->line}, entry->value);
    }
    if (it != doc.sections.end())
      for (const auto& [name, entry] : it->second)
        if (!known.count(name)) throw ConfigError(std::string(sec.name) + "." + name, "unknown key", entry.line);
  }
  for (const auto& [name, keys] : doc.sections)
    if (!known_sections.count(name)) throw ConfigError("[" + name + "]", "unknown section");
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading config file '" + path + "'");
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
  std::string out;
  bool first = true;
  for (const Section& sec : schema()) {
    if (!first) out += "\n";
    first = false;
    out += "[" + std::string(sec.name) + "]\n";
    for (const Key& k : sec.keys) out += std::string(k.name) + " = " + k.get(c) + "\n";
  }
  return out;
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const ExperimentConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(dump_config(c))));
  return buf;
}

}  // namespace cgoforge
