#include "cgoforge/potential.hpp"

#include <cmath>

#include "cgoforge/error.hpp"
#include "cgoforge/spectral.hpp"

namespace cgoforge {

void Potential::validate() const {
  if (static_cast<int>(A.size()) != grid().n) throw InputError("potential: need one A_k per axis");
  if (B.rows() != m || B.cols() != m) throw InputError("potential: B must be m x m");
  for (const auto& a : A)
    if (!a.same_shape(B)) throw InputError("potential: A_k and B shapes differ");
}

Potential zero_potential(const Grid& g, int m) {
  Potential p;
  p.m = m;
  p.B = Field(g, m, m);
  p.A.assign(g.n, Field(g, m, m));
  return p;
}

Potential gaussian_yang_mills(const Grid& g, const RVec& center, double sigma, double amp,
                              double amp_b) {
  const cplx I(0, 1);
  // Hermitian, pairwise non-commuting, and (M_1 + i M_2)^2 != 0 so theta.A is
  // not nilpotent (Pauli vectors would be: (theta.sigma)^2 = theta.theta = 0).
  const Eigen::Matrix2cd gens[3] = {
      (Eigen::Matrix2cd() << 1.0, 0.5, 0.5, 0.0).finished(),
      (Eigen::Matrix2cd() << 0.0, -0.5 * I, 0.5 * I, 0.7).finished(),
      (Eigen::Matrix2cd() << 0.3, 0.2, 0.2, -0.3).finished()};
  const Eigen::Matrix2cd mb = (Eigen::Matrix2cd() << 1.0, 0.3, 0.3, 0.5).finished();
  Field bump = sample(g, [&](const RVec& x) { return std::exp(-(x - center).squaredNorm() / (sigma * sigma)); });
  Potential p = zero_potential(g, 2);
  for (int k = 0; k < g.n; ++k)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        for (size_t i = 0; i < g.size(); ++i) p.A[k].at(i, r, c) = amp * gens[k](r, c) * bump.at(i);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      for (size_t i = 0; i < g.size(); ++i) p.B.at(i, r, c) = amp_b * mb(r, c) * bump.at(i);
  return p;
}

Potential scalar_potential(const std::vector<Field>& a, int m) {
  if (a.empty()) throw InputError("scalar_potential: empty list");
  const Grid& g = a[0].grid();
  Potential p = zero_potential(g, m);
  for (int k = 0; k < g.n; ++k)
    for (int r = 0; r < m; ++r) p.A[k].set_component(r, r, a[k]);
  return p;
}

Field v_from_b(const Potential& p) {
  Field V = p.B;
  for (size_t k = 0; k < p.A.size(); ++k) {
    V -= matmul(p.A[k], p.A[k]);
    V += cplx(0, 1) * partial(p.A[k], static_cast<int>(k));
  }
  return V;
}

Field b_from_v(const std::vector<Field>& A, const Field& V) {
  Field B = V;
  for (size_t k = 0; k < A.size(); ++k) {
    B += matmul(A[k], A[k]);
    B -= cplx(0, 1) * partial(A[k], static_cast<int>(k));
  }
  return B;
}

}  // namespace cgoforge
