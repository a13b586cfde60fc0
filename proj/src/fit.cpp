#include "cgoforge/fit.hpp"

#include <cmath>

#include "cgoforge/error.hpp"

namespace cgoforge {

DecayFit fit_decay_order(const std::vector<double>& taus, const std::vector<double>& values) {
  if (taus.size() != values.size()) throw InputError("fit: length mismatch");
  if (taus.size() < 3) throw InputError("fit: at least 3 samples required");
  const size_t n = taus.size();
  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    if (!(taus[i] > 0.0) || !(values[i] > 0.0) || !std::isfinite(values[i]))
      throw InputError("fit: non-positive sample");
    x[i] = std::log(taus[i]);
    y[i] = std::log(values[i]);
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InputError("fit: taus must not all be equal");
  DecayFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

PowerFit fit_powers(const std::vector<double>& taus, const std::vector<cplx>& values,
                    const std::vector<int>& powers) {
  if (taus.size() != values.size()) throw InputError("power fit: length mismatch");
  if (powers.empty() || taus.size() < powers.size())
    throw InputError("power fit: fewer samples than coefficients");
  double lg = 0.0;
  for (double t : taus) {
    if (!(t > 0.0)) throw InputError("power fit: tau must be positive");
    lg += std::log(t);
  }
  const double tref = std::exp(lg / taus.size());
  const auto m = static_cast<Eigen::Index>(taus.size());
  const auto k = static_cast<Eigen::Index>(powers.size());
  Eigen::MatrixXd X(m, k);
  Eigen::VectorXcd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) X(i, j) = std::pow(taus[i] / tref, powers[j]);
    y[i] = values[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  PowerFit out;
  out.powers = powers;
  out.condition_number = s[s.size() - 1] > 0.0 ? s[0] / s[s.size() - 1] : INFINITY;
  out.ill_conditioned = out.condition_number > 1e10;
  const Eigen::VectorXcd c = svd.solve(y.real()).cast<cplx>() + cplx(0, 1) * svd.solve(y.imag()).cast<cplx>();
  const double ny = y.norm();
  out.residual = ny > 0.0 ? (X.cast<cplx>() * c - y).norm() / ny : 0.0;
  for (Eigen::Index j = 0; j < k; ++j)
    out.coefficients.push_back(c[j] / std::pow(tref, powers[j]));
  return out;
}

}  // namespace cgoforge
