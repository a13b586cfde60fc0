#pragma once
// Independent reference computations shared by unit and acceptance tests.

#include <cmath>
#include <complex>

#include "cgoforge/cutoff.hpp"
#include "cgoforge/potential.hpp"
#include "cgoforge/transport.hpp"

namespace oracle {

using cgoforge::cplx;
using cgoforge::Field;

// Commutative transport: for A = a I the fixed point is exp(-i K(theta.a)) with
// the constant-per-slice kernel gauge removed, i.e. divided by its slice mean.
inline Field commutative_transport(const std::vector<Field>& a, const cgoforge::CVec& theta,
                                   const cgoforge::CutoffPair& cut) {
  cgoforge::SinkAntiderivative K(cut, theta);
  Field ta = cgoforge::scale(cut.psi, cgoforge::contract(theta, a));
  Field phi = K.apply(ta);
  Field e(phi.grid());
  for (size_t i = 0; i < e.nodes(); ++i) e.at(i) = std::exp(cplx(0, -1) * phi.at(i));
  Field p = K.project(e);
  for (size_t i = 0; i < e.nodes(); ++i) e.at(i) /= p.at(i);
  return e;
}

inline Field gaussian(const cgoforge::Grid& g, const cgoforge::RVec& c, double s, double amp) {
  return cgoforge::sample(g, [&](const cgoforge::RVec& x) { return amp * std::exp(-(x - c).squaredNorm() / (s * s)); });
}

// Periodic bump amp * exp((sum_k cos(2 pi (x_k - c_k) / L) - n) / w): smooth on the torus,
// Gaussian-like of width ~ sqrt(w) L / (2 pi) near c.
inline Field periodic_bump(const cgoforge::Grid& g, const cgoforge::RVec& c, double w, double amp) {
  return cgoforge::sample(g, [&](const cgoforge::RVec& x) {
    double s = 0;
    for (int k = 0; k < g.n; ++k) s += std::cos(2 * 3.141592653589793 * (x[k] - c[k]) / g.L) - 1.0;
    return amp * std::exp(s / w);
  });
}

}  // namespace oracle
