#include "cgoforge/krylov.hpp"

#include <cmath>

namespace cgoforge {

namespace {

double nrm(const CArray& v) {
  double s = 0.0;
  for (auto z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx dotc(const CArray& a, const CArray& b) {
  cplx s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace

KrylovResult gmres(const std::function<CArray(const CArray&)>& apply, const CArray& b,
                   const CArray& x0, double tol, int max_iter, int restart) {
  KrylovResult res;
  res.x = x0.empty() ? CArray(b.size(), 0.0) : x0;
  const double bn = nrm(b);
  if (bn == 0.0) {
    res.x.assign(b.size(), 0.0);
    res.converged = true;
    return res;
  }
  while (res.iterations < max_iter) {
    CArray r = apply(res.x);
    for (size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    double beta = nrm(r);
    res.relative_residual = beta / bn;
    if (res.relative_residual <= tol) {
      res.converged = true;
      return res;
    }
    const int m = restart;
    std::vector<CArray> V(1, r);
    for (auto& z : V[0]) z /= beta;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
    std::vector<cplx> cs(m), sn(m), g(m + 1, 0.0);
    g[0] = beta;
    int k = 0;
    for (; k < m && res.iterations < max_iter; ++k, ++res.iterations) {
      CArray w = apply(V[k]);
      for (int j = 0; j <= k; ++j) {
        H(j, k) = dotc(V[j], w);
        for (size_t i = 0; i < w.size(); ++i) w[i] -= H(j, k) * V[j][i];
      }
      const double hn = nrm(w);
      H(k + 1, k) = hn;
      for (int j = 0; j < k; ++j) {
        const cplx t = std::conj(cs[j]) * H(j, k) + std::conj(sn[j]) * H(j + 1, k);
        H(j + 1, k) = -sn[j] * H(j, k) + cs[j] * H(j + 1, k);
        H(j, k) = t;
      }
      const double den = std::sqrt(std::norm(H(k, k)) + std::norm(H(k + 1, k)));
      cs[k] = den > 0 ? H(k, k) / den : 1.0;
      sn[k] = den > 0 ? H(k + 1, k) / den : 0.0;
      H(k, k) = den;
      H(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = std::conj(cs[k]) * g[k];
      res.relative_residual = std::abs(g[k + 1]) / bn;
      if (res.relative_residual <= tol || hn == 0.0) {
        ++k;
        ++res.iterations;
        break;
      }
      for (auto& z : w) z /= hn;
      V.push_back(std::move(w));
    }
    // Back-substitution and update.
    Eigen::VectorXcd y(k);
    for (int i = k - 1; i >= 0; --i) {
      cplx s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H(i, j) * y[j];
      y[i] = s / H(i, i);
    }
    for (int j = 0; j < k; ++j)
      for (size_t i = 0; i < res.x.size(); ++i) res.x[i] += y[j] * V[j][i];
  }
  CArray r = apply(res.x);
  double s = 0.0;
  for (size_t i = 0; i < r.size(); ++i) s += std::norm(b[i] - r[i]);
  res.relative_residual = std::sqrt(s) / bn;
  res.converged = res.relative_residual <= tol;
  return res;
}

}  // namespace cgoforge
