#include "cgoforge/cutoff.hpp"

#include <cmath>

#include "cgoforge/error.hpp"

namespace cgoforge {

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double t4 = t * t * t * t;
  return t4 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}

double smoothstep_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = t * (1.0 - t);
  return 140.0 * u * u * u;
}

double ramp(double x, double lo, double hi, double m) {
  if (x < lo) return smoothstep((x - (lo - m)) / m);
  if (x > hi) return smoothstep(((hi + m) - x) / m);
  return 1.0;
}

CutoffPair make_cutoffs(const Grid& g, const Box& omega, std::pair<double, double> margins) {
  const auto [m0, m1] = margins;
  if (omega.dim() != g.n) throw InputError("cutoffs: box dimension mismatch");
  if (!(m0 > 0.0) || !(m1 > 0.0)) throw InputError("cutoffs: margins must be positive");
  for (int a = 0; a < g.n; ++a) {
    if (!(omega.hi[a] > omega.lo[a])) throw InputError("cutoffs: empty box");
    if (omega.lo[a] - m0 - m1 <= 0.0 || omega.hi[a] + m0 + m1 >= g.L)
      throw InputError("cutoffs: box plus margins does not fit inside the period");
  }
  CutoffPair c;
  c.omega = omega;
  c.margins = margins;
  c.psi_axis.assign(g.n, std::vector<double>(g.N));
  c.psi0_axis.assign(g.n, std::vector<double>(g.N));
  for (int a = 0; a < g.n; ++a)
    for (int j = 0; j < g.N; ++j) {
      const double x = g.coord(j);
      c.psi0_axis[a][j] = ramp(x, omega.lo[a], omega.hi[a], m0);
      c.psi_axis[a][j] = ramp(x, omega.lo[a] - m0, omega.hi[a] + m0, m1);
    }
  c.psi = Field(g);
  c.psi0 = Field(g);
  const double tol = 1e-9 * g.h();
  for (size_t i = 0; i < g.size(); ++i) {
    auto idx = g.index(i);
    double p = 1.0, p0 = 1.0;
    for (int a = 0; a < g.n; ++a) {
      p *= c.psi_axis[a][idx[a]];
      p0 *= c.psi0_axis[a][idx[a]];
    }
    c.psi.at(i) = p;
    c.psi0.at(i) = p0;
    // Nesting: omega in {psi0 = 1}, supp psi0 in {psi = 1}, psi = 0 on the period edge.
    if (omega.contains(g.point(i), tol) && p0 != 1.0)
      throw Error("cutoffs: psi0 != 1 inside omega");
    if (p0 > 0.0 && p != 1.0) throw Error("cutoffs: supp psi0 not inside {psi = 1}");
    for (int a = 0; a < g.n; ++a)
      if (idx[a] == 0 && p != 0.0) throw Error("cutoffs: psi not zero at the period edge");
  }
  return c;
}

Field psi_profile(const CutoffPair& c, const std::vector<int>& axes) {
  const Grid& g = c.psi.grid();
  Field out(g);
  for (size_t i = 0; i < g.size(); ++i) {
    auto idx = g.index(i);
    double p = 1.0;
    for (int a : axes) p *= c.psi_axis[a][idx[a]];
    out.at(i) = p;
  }
  return out;
}

}  // namespace cgoforge
