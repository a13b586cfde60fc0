#pragma once
// Sectioned key-value experiment configs.
//
//   # full-line comment
//   [section]
//   key = value
//
// One normal form: every section and key in schema order, defaults filled in,
// numbers in shortest round-trip form, lists as "a, b, c", expressions canonical.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cgoforge/error.hpp"
#include "cgoforge/expr.hpp"
#include "cgoforge/field.hpp"

namespace cgoforge {

// Diagnostic naming the offending key ("frame.tau"); line is 0 when not tied to one.
class ConfigError : public InputError {
 public:
  ConfigError(const std::string& key, const std::string& message, int line = 0);
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

struct ConfigEntry {
  std::string value;
  int line = 0;
};

// Syntax layer: sections of raw key = value strings (no schema).
struct ConfigDocument {
  std::map<std::string, std::map<std::string, ConfigEntry>> sections;
  static ConfigDocument parse(std::string_view text);
};

// A scalar coefficient given as an expression, with its source text in normal form.
struct ExprField {
  Expr expr;
  std::string text() const { return print_expr(expr); }
  Field sample(const Grid& g) const { return evaluate_field(expr, g); }
};

struct GridSpec {
  int points = 32;
  double period = 4.0;
};

struct DomainSpec {
  RVec lo = RVec::Constant(3, 1.5);
  RVec hi = RVec::Constant(3, 2.5);
  std::pair<double, double> margins{0.5, 0.7};
};

struct FrameSpec {
  RVec mu = RVec::Unit(3, 0), nu = RVec::Unit(3, 1), l = RVec::Unit(3, 2);
  std::vector<double> tau{8, 16, 32, 64};
  std::vector<double> phase_angles{1.0471975511965976, 1.5707963267948966, 3.141592653589793};
};

enum class PotentialFamily { Zero, GaussianYangMills, Scalar };

struct PotentialSpec {
  PotentialFamily family = PotentialFamily::GaussianYangMills;
  int m = 2;  // zero and scalar families
  RVec center = RVec::Constant(3, 2.0);
  double sigma = 0.35, amplitude = 1.0, amplitude_b = 0.5;
  std::vector<ExprField> a;  // scalar family: A_k = a_k I
};

struct ExpansionSpec {
  int order = 2;
  int max_order = 6;
  std::vector<std::vector<double>> p{{1.0}, {0.5}};  // per component, ascending in theta.x
  bool corrector = false;
  std::vector<double> corrector_tau{32, 64, 128};
  bool corrector_krylov = false;  // Richardson; true selects GMRES on the same operator
  int corrector_max_iter = 300;
};

struct GaugeSpec {
  ExprField phase, control_phase;
  Eigen::Matrix2d hermitian;
  RVec box_lo = RVec::Constant(3, 1.0), box_hi = RVec::Constant(3, 3.0);
  std::vector<int> cells{16, 24};
  int fine_points = 96;
  int collar = 1;
};

enum class LameFamily { Bump, Expression };

struct LameSpec {
  LameFamily family = LameFamily::Bump;
  ExprField lambda1, mu1, lambda2, mu2;  // lambda2, mu2 used by the expression family
  RVec bump_center = RVec::Constant(3, 2.0);
  double bump_radius = 0.8, bump_lambda = 0.1, bump_mu = 0.2;
};

struct ElasticSpec {
  RVec omega_lo = RVec::Constant(3, 1.0), omega_hi = RVec::Constant(3, 3.0);
  std::pair<double, double> margins{0.25, 0.5};
  RVec l = RVec::Unit(3, 2);
  std::vector<double> p{1.0, 0.0, 0.0, 0.0};
  std::vector<double> tau{8, 12, 16, 24, 32, 48, 64};
  int order = 0;
  int coefficients = 3;
  std::vector<double> quartic_lnorms{0.5, 1.0, 1.5, 2.0};
  std::vector<double> quartic_tau{8, 12, 16, 24, 32};
  std::vector<double> quartic_pair{1.0, 1.0, 1.3, 1.2};  // lambda1, mu1, lambda2, mu2
  std::vector<int> green_cells{6, 12, 24};
  double green_radius = 0.45, green_lambda = 0.3, green_mu = 0.2;
};

struct IdentitySpec {
  int theta_samples = 6;
  int check_samples = 8;
  std::vector<double> alphas{0.5, 1.0, 2.0};
};

struct ToleranceSpec {
  double transport = 1e-8;
  double min_det = 0.1;
  double phase = 1e-8;
  double free_exact = 1e-10;
  double slope = 0.5;
  double leading_slope = 0.3;
  std::pair<double, double> gauge_ratio{1.3, 4.5};  // accepted decrease ratio range
  double green_factor = 5.0;
  double h2_relative = 0.05;
  double quartic_relative = 0.15;
  double identity_equal = 1e-10;
  double identity_reconstruction = 1e-8;
};

struct ExperimentConfig {
  GridSpec grid;
  DomainSpec domain;
  FrameSpec frame;
  PotentialSpec potential;
  ExpansionSpec expansion;
  GaugeSpec gauge;
  LameSpec lame;
  ElasticSpec elastic;
  IdentitySpec identity;
  ToleranceSpec tolerances;
  std::string output_dir = "out";

  ExperimentConfig();
  Box omega() const { return Box{domain.lo, domain.hi}; }
  Box elastic_omega() const { return Box{elastic.omega_lo, elastic.omega_hi}; }
};

// Parses, applies defaults and validates every value and cross-field constraint.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);  // IoError when unreadable
// Normal form (schema order, all keys, LF endings).
std::string dump_config(const ExperimentConfig& c);
// All constraints; parse_config calls it.
void validate_config(const ExperimentConfig& c);
// FNV-1a 64 of the normal form, 16 hex digits.
std::string config_hash(const ExperimentConfig& c);
uint64_t fnv1a64(std::string_view s);

}  // namespace cgoforge
