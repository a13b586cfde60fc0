#pragma once

#include <string>
#include <vector>

#include "cgoforge/cutoff.hpp"
#include "cgoforge/potential.hpp"
#include "cgoforge/transport.hpp"

namespace cgoforge {

// Vector of polynomials in z = theta . (x - origin); coefficients ascending.
struct PolyVector {
  std::vector<std::vector<cplx>> coefficients;  // one list per component

  static PolyVector constant(const CVec& v);
  int size() const { return static_cast<int>(coefficients.size()); }
  int degree() const;
  // d-th derivative in z evaluated nodewise, as an m x 1 field.
  Field evaluate(const Grid& g, const CVec& theta, const RVec& origin, int derivative = 0) const;
};

struct CgoOptions {
  int max_degree = 4;
  int max_order = 6;
  // C_k = C_0 G_k with constant invertible G_k (still a transport solution).
  bool independent_ck = false;
  double telescoping_tol = 1e-13;  // GMRES tolerance for each v_k
  TransportOptions transport;
};

struct CgoExpansion {
  Frame frame;
  PolyVector p;
  RVec origin;                     // center of omega; z is measured from it
  int order = 0;
  std::vector<Field> terms;        // v_0 (sampled), v_1, ..., v_n
  std::vector<TransportSolution> C_list;
  CutoffPair psi;
  std::vector<double> telescoping;  // relative defect per k >= 1 on {psi = 1}
};

// (-Delta - 2i d.grad + 2 (A.d) - 2i sum A_k d_k + B) v for a periodic field v.
Field apply_operator(const Field& v, const CVec& d, const Potential& pot);
Field apply_m_delta_prime(const Field& v, const Frame& f, const Potential& pot);
Field apply_l_delta(const Field& v, const Frame& f, const Potential& pot);
// Same operators on C p(z) via the product rule (p need not be periodic).
Field apply_operator_factored(const Field& C, const PolyVector& p, const RVec& origin,
                              const CVec& d, const CVec& theta, const Potential& pot);

CgoExpansion build_expansion(const Potential& pot, const Frame& frame, const PolyVector& p, int n,
                             const CutoffPair& cut, const CgoOptions& opt = {},
                             const TransportSolution* c0 = nullptr);

// (v - v_0): the τ-decaying part of the expansion.
Field expansion_tail(const CgoExpansion& e);
// L^2 over the region of L_delta applied to v_0 + ... + v_n.
double expansion_residual(const CgoExpansion& e, const Potential& pot, const Mask& region);
// L^2 over the region of M_{delta'} v_n.
double last_term_source(const CgoExpansion& e, const Potential& pot, const Mask& region);

struct CorrectorResult {
  Field v;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;             // relative, of L_delta v = f on {psi = 1}
  std::vector<double> history;
  std::string diagnostic;
};

// Experimental: L_delta v = -psi0 M v_n by Richardson iteration g <- f - T g with
// T = L_delta C_0 E - I and E the multiplier 1/(|xi|^2 + 2 delta.xi); v = C_0 E g.
// Zero-symbol modes (always xi = 0) are dropped and the equation is solved and
// measured modulo them. use_krylov replaces Richardson by GMRES on the same operator.
CorrectorResult solve_corrector(const CgoExpansion& e, const Potential& pot, double tol,
                                int max_iter, double tau_floor = 0.0, bool use_krylov = false);
// The same iteration for an arbitrary right side (f = 0 gives v = 0).
CorrectorResult solve_corrector_rhs(const Field& f, const Field& C0, const Frame& frame,
                                    const Potential& pot, const Mask& region, double tol,
                                    int max_iter, bool use_krylov = false);

}  // namespace cgoforge
