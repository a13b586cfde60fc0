#include "cgoforge/cgo.hpp"

#include <cmath>

#include "cgoforge/error.hpp"
#include "cgoforge/krylov.hpp"
#include "cgoforge/spectral.hpp"

namespace cgoforge {

namespace {

const cplx kI(0, 1);

// Symbol of -Delta - 2i d.grad, namely |xi|^2 + 2 d.xi.
std::vector<cplx> principal_symbol(const Grid& g, const CVec& d) {
  const auto k = axis_frequencies(g);
  std::vector<cplx> s(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    auto idx = g.index(i);
    cplx v = 0.0;
    for (int a = 0; a < g.n; ++a) v += k[idx[a]] * (k[idx[a]] + 2.0 * d[a]);
    s[i] = v;
  }
  return s;
}

Field directional_matrix_derivative(const Field& C, const CVec& theta) {
  return directional_derivative(C, theta);
}

// i theta.d v - (theta.A) v.
Field transport_operator(const Field& v, const CVec& theta, const Field& thetaA) {
  return kI * directional_derivative(v, theta) - matmul(thetaA, v);
}

}  // namespace

PolyVector PolyVector::constant(const CVec& v) {
  PolyVector p;
  for (auto c : v) p.coefficients.push_back({c});
  return p;
}

int PolyVector::degree() const {
  int d = 0;
  for (const auto& c : coefficients) d = std::max(d, static_cast<int>(c.size()) - 1);
  return d;
}

Field PolyVector::evaluate(const Grid& g, const CVec& theta, const RVec& origin, int derivative) const {
  Field out(g, size(), 1);
  for (size_t i = 0; i < g.size(); ++i) {
    const cplx z = bdot(theta, (g.point(i) - origin).cast<cplx>());
    for (int r = 0; r < size(); ++r) {
      const auto& c = coefficients[r];
      cplx acc = 0.0;
      // Horner on the derivative's coefficients.
      for (int j = static_cast<int>(c.size()) - 1; j >= derivative; --j) {
        double fall = 1.0;
        for (int t = 0; t < derivative; ++t) fall *= (j - t);
        acc = acc * z + fall * c[j];
      }
      out.at(i, r) = acc;
    }
  }
  return out;
}

Field apply_operator(const Field& v, const CVec& d, const Potential& pot) {
  const Grid& g = v.grid();
  Field out = apply_symbol(v, principal_symbol(g, d));
  out += 2.0 * matmul(contract(d, pot.A), v);
  for (int k = 0; k < g.n; ++k) out -= 2.0 * kI * matmul(pot.A[k], partial(v, k));
  out += matmul(pot.B, v);
  return out;
}

Field apply_m_delta_prime(const Field& v, const Frame& f, const Potential& pot) {
  return apply_operator(v, f.delta_prime, pot);
}

Field apply_l_delta(const Field& v, const Frame& f, const Potential& pot) {
  return apply_operator(v, f.delta, pot);
}

Field apply_operator_factored(const Field& C, const PolyVector& p, const RVec& origin,
                              const CVec& d, const CVec& theta, const Potential& pot) {
  const Grid& g = C.grid();
  Field P0 = p.evaluate(g, theta, origin, 0);
  Field out = matmul(apply_operator(C, d, pot), P0);
  if (p.degree() >= 1) {
    Field P1 = p.evaluate(g, theta, origin, 1);
    Field first = -2.0 * directional_matrix_derivative(C, theta) - 2.0 * kI * bdot(d, theta) * C -
                  2.0 * kI * matmul(contract(theta, pot.A), C);
    out += matmul(first, P1);
  }
  if (p.degree() >= 2) {
    Field P2 = p.evaluate(g, theta, origin, 2);
    out -= bdot(theta, theta) * matmul(C, P2);
  }
  return out;
}

CgoExpansion build_expansion(const Potential& pot, const Frame& frame, const PolyVector& p, int n,
                             const CutoffPair& cut, const CgoOptions& opt,
                             const TransportSolution* c0) {
  pot.validate();
  const Grid& g = pot.grid();
  if (frame.dim() != g.n) throw InputError("cgo: frame dimension differs from grid");
  if (p.size() != pot.m) throw InputError("cgo: p must have m components");
  if (p.degree() > opt.max_degree) throw InputError("cgo: polynomial degree exceeds max_degree");
  if (n < 0 || n > opt.max_order) throw InputError("cgo: expansion order out of range");

  CgoExpansion e;
  e.frame = frame;
  e.p = p;
  e.origin = cut.omega.center();
  e.order = n;
  e.psi = cut;
  e.C_list.push_back(c0 ? *c0 : solve_transport(pot.A, frame.theta, cut, opt.transport));
  for (int k = 1; k <= n; ++k) {
    TransportSolution ck = e.C_list[0];
    if (opt.independent_ck) {
      Field G = identity_field(g, pot.m);
      for (int r = 0; r + 1 < pot.m; ++r)
        for (size_t i = 0; i < g.size(); ++i) G.at(i, r, r + 1) = 0.25 * k;
      ck.C = matmul(ck.C, G);
    }
    e.C_list.push_back(std::move(ck));
  }

  const Field& C0 = e.C_list[0].C;
  e.terms.push_back(matmul(C0, p.evaluate(g, frame.theta, e.origin)));
  const Field thetaA = contract(frame.theta, pot.A);
  const Mask one = mask_where_one(cut.psi);
  SinkAntiderivative K(cut, frame.theta);
  const double tau = frame.tau;

  Field Mprev = apply_operator_factored(C0, p, e.origin, frame.delta_prime, frame.theta, pot);
  for (int k = 1; k <= n; ++k) {
    const Field& C = e.C_list[k].C;
    const Field Cinv = inverse(C);
    const Field src = scale(cut.psi, Mprev);
    const Field gk = (1.0 / (2.0 * tau)) * src;
    auto explicit_solve = [&](const Field& rhs) {
      return -kI * matmul(C, K.apply(matmul(Cinv, rhs)));
    };
    // The explicit formula S q = -i C K(C^{-1} q) inverts the transport operator
    // only up to discrete product-rule errors. Solve psi T(S q) + (1 - psi) q = g by
    // GMRES so that v = S q satisfies the telescoping identity on {psi = 1} exactly.
    auto op = [&](const CArray& x) {
      Field q = gk;
      q.values() = x;
      Field r = scale(cut.psi, transport_operator(explicit_solve(q), frame.theta, thetaA));
      Field rest = q - scale(cut.psi, q);
      r += rest;
      return r.values();
    };
    auto kr = gmres(op, gk.values(), gk.values(), opt.telescoping_tol, 400, 40);
    Field q = gk;
    q.values() = kr.x;
    Field v = explicit_solve(q);
    const double ns = l2_norm(src, one);
    const Field tel = 2.0 * tau * transport_operator(v, frame.theta, thetaA) - src;
    e.telescoping.push_back(ns > 0.0 ? l2_norm(tel, one) / ns : l2_norm(tel, one));
    Mprev = apply_m_delta_prime(v, frame, pot);
    e.terms.push_back(std::move(v));
  }
  return e;
}

Field expansion_tail(const CgoExpansion& e) {
  Field t(e.terms[0].grid(), e.terms[0].rows(), 1);
  for (size_t k = 1; k < e.terms.size(); ++k) t += e.terms[k];
  return t;
}

double expansion_residual(const CgoExpansion& e, const Potential& pot, const Mask& region) {
  Field r = apply_operator_factored(e.C_list[0].C, e.p, e.origin, e.frame.delta, e.frame.theta, pot);
  for (size_t k = 1; k < e.terms.size(); ++k) r += apply_l_delta(e.terms[k], e.frame, pot);
  return l2_norm(r, region);
}

double last_term_source(const CgoExpansion& e, const Potential& pot, const Mask& region) {
  if (e.order == 0)
    return l2_norm(apply_operator_factored(e.C_list[0].C, e.p, e.origin, e.frame.delta_prime,
                                           e.frame.theta, pot),
                   region);
  return l2_norm(apply_m_delta_prime(e.terms.back(), e.frame, pot), region);
}

CorrectorResult solve_corrector_rhs(const Field& f, const Field& C0, const Frame& frame,
                                    const Potential& pot, const Mask& region, double tol,
                                    int max_iter, bool use_krylov) {
  CorrectorResult res;
  const Grid& g = f.grid();
  res.v = Field(g, f.rows(), f.cols());
  const double nf = l2_norm(f, region);
  if (nf == 0.0) {
    res.converged = true;
    res.diagnostic = "zero right side";
    return res;
  }
  auto sym = principal_symbol(g, frame.delta);
  // Multiplier inverse; exact zeros of the symbol are left out (reported).
  size_t dropped = 0;
  const double floor = 1e-12 * frame.tau * frame.tau;
  std::vector<cplx> inv(sym.size());
  for (size_t i = 0; i < sym.size(); ++i) {
    if (std::abs(sym[i]) <= floor) {
      inv[i] = 0.0;
      ++dropped;
    } else {
      inv[i] = 1.0 / sym[i];
    }
  }
  // Projection off the dropped modes (the torus problem is solved modulo them).
  std::vector<cplx> keep(sym.size());
  for (size_t i = 0; i < sym.size(); ++i) keep[i] = inv[i] == cplx(0.0) ? 0.0 : 1.0;
  auto Pi = [&](const Field& x) { return dropped ? apply_symbol(x, keep) : x; };
  auto P = [&](const Field& x) { return matmul(C0, apply_symbol(x, inv)); };
  const Field fp = Pi(f);
  const double nfp = l2_norm(fp, region);
  Field gk = fp;
  double best = INFINITY;
  if (use_krylov) {
    auto op = [&](const CArray& x) {
      Field q = f;
      q.values() = x;
      return Pi(apply_l_delta(P(q), frame, pot)).values();
    };
    auto kr = gmres(op, fp.values(), fp.values(), tol, max_iter, 50);
    gk.values() = kr.x;
    res.iterations = kr.iterations;
    res.history.push_back(kr.relative_residual);
    res.converged = kr.converged;
    best = kr.relative_residual;
  } else {
    for (int it = 1; it <= max_iter; ++it) {
      Field r = Pi(fp - apply_l_delta(P(gk), frame, pot));
      const double rel = l2_norm(r, region) / nfp;
      res.history.push_back(rel);
      res.iterations = it;
      if (!std::isfinite(rel) || rel > 1e6) break;
      best = std::min(best, rel);
      if (rel <= tol) {
        res.converged = true;
        break;
      }
      if (it > 30 && rel > 0.999 * res.history[it - 31]) break;  // no progress
      gk += r;
    }
  }
  res.v = P(gk);
  res.residual = res.history.empty() ? 0.0 : res.history.back();
  if (res.converged) {
    res.diagnostic = "converged";
  } else {
    res.diagnostic = "tau too small or potential too strong: preconditioned iteration did not converge (best residual " +
                     std::to_string(best) + ")";
  }
  if (dropped) res.diagnostic += "; " + std::to_string(dropped) + " zero-symbol modes dropped";
  return res;
}

CorrectorResult solve_corrector(const CgoExpansion& e, const Potential& pot, double tol,
                                int max_iter, double tau_floor, bool use_krylov) {
  if (e.frame.tau < tau_floor) throw InputError("corrector: tau below configured floor");
  Field Mv = e.order == 0 ? apply_operator_factored(e.C_list[0].C, e.p, e.origin,
                                                    e.frame.delta_prime, e.frame.theta, pot)
                          : apply_m_delta_prime(e.terms.back(), e.frame, pot);
  Field f = -1.0 * scale(e.psi.psi0, Mv);
  return solve_corrector_rhs(f, e.C_list[0].C, e.frame, pot, {}, tol, max_iter, use_krylov);
}

}  // namespace cgoforge
