#include "cgoforge/transport.hpp"

#include <cmath>
#include <complex>

#include "cgoforge/error.hpp"
#include "cgoforge/krylov.hpp"
#include "cgoforge/spectral.hpp"

namespace cgoforge {

namespace {

const cplx kI(0, 1);

using SliceMats = std::vector<Eigen::MatrixXcd>;

// Per-slice means of a matrix field, as small matrices.
SliceMats slice_means(const SinkAntiderivative& K, const Field& f) {
  SliceMats out(K.slices(), Eigen::MatrixXcd::Zero(f.rows(), f.cols()));
  std::vector<double> count(K.slices(), 0.0);
  for (size_t i = 0; i < f.nodes(); ++i) {
    const int s = K.slice_of(i);
    count[s] += 1.0;
    for (int r = 0; r < f.rows(); ++r)
      for (int c = 0; c < f.cols(); ++c) out[s](r, c) += f.at(i, r, c);
  }
  for (int s = 0; s < K.slices(); ++s) out[s] /= count[s];
  return out;
}

// Nodewise F(x) * M[slice(x)].
Field slice_right_multiply(const SinkAntiderivative& K, const Field& f, const SliceMats& M) {
  Field out(f.grid(), f.rows(), M[0].cols());
  for (size_t i = 0; i < f.nodes(); ++i) {
    const auto& m = M[K.slice_of(i)];
    for (int r = 0; r < f.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) {
        cplx s = 0.0;
        for (int k = 0; k < f.cols(); ++k) s += f.at(i, r, k) * m(k, c);
        out.at(i, r, c) = s;
      }
  }
  return out;
}

// Lambda per slice: P(kappa C)^{-1} P(arg).
SliceMats sink_multiplier(const SinkAntiderivative& K, const Field& kc, const Field& arg) {
  SliceMats a = slice_means(K, kc), b = slice_means(K, arg), out(K.slices());
  for (int s = 0; s < K.slices(); ++s) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a[s]);
    if (!(std::abs(lu.determinant()) > 1e-14))
      throw SolverError("transport: sink normalization P(kappa C) became singular", INFINITY);
    out[s] = lu.solve(b[s]);
  }
  return out;
}

double rel_diff(const Field& a, const Field& b) {
  const double nb = l2_norm(b);
  return nb > 0.0 ? l2_norm(a - b) / nb : l2_norm(a - b);
}

CArray flatten(const Field& f) { return f.values(); }
Field unflatten(const Field& shape, const CArray& v) {
  Field f = shape;
  f.values() = v;
  return f;
}

}  // namespace

SinkAntiderivative::SinkAntiderivative(const CutoffPair& cut, const CVec& theta) : theta_(theta) {
  const Grid& g = cut.psi.grid();
  if (theta.size() != g.n) throw InputError("transport: theta dimension mismatch");
  std::vector<int> axes;
  for (int a = 0; a < g.n; ++a)
    if (std::abs(theta[a]) > 1e-12) axes.push_back(a);
  if (axes.size() != 2)
    throw InputError("transport: mu and nu must span a coordinate plane");
  plane_ = {axes[0], axes[1]};
  slices_ = g.n == 3 ? g.N : 1;
  Field prof = psi_profile(cut, axes);
  kappa_ = Field(g);
  double mean = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    kappa_.at(i) = 1.0 - prof.at(i).real();
    mean += kappa_.at(i).real();
  }
  mean /= static_cast<double>(g.size());
  if (!(mean > 0.0)) throw InputError("transport: cutoff leaves no room for the sink");
  // The in-plane profile is identical on every slice, so a global mean suffices.
  kappa_ *= 1.0 / mean;
}

int SinkAntiderivative::slice_of(size_t node) const {
  if (slices_ == 1) return 0;
  const Grid& g = kappa_.grid();
  auto idx = g.index(node);
  return idx[3 - plane_[0] - plane_[1]];
}

Field SinkAntiderivative::project(const Field& f) const {
  Field out(f.grid(), f.rows(), f.cols());
  auto means = slice_means(*this, f);
  for (size_t i = 0; i < f.nodes(); ++i)
    for (int r = 0; r < f.rows(); ++r)
      for (int c = 0; c < f.cols(); ++c) out.at(i, r, c) = means[slice_of(i)](r, c);
  return out;
}

Field SinkAntiderivative::apply(const Field& f) const {
  Field src = f - scale(kappa_, project(f));
  return antiderivative(src, theta_).value;
}

double transport_residual(const Field& C, const std::vector<Field>& A, const CVec& theta,
                          const Mask& region) {
  Field r = kI * directional_derivative(C, theta) - matmul(contract(theta, A), C);
  return l2_norm(r, region);
}

Field fd_directional_derivative(const Field& f, const CVec& theta) {
  const Grid& g = f.grid();
  Field out(g, f.rows(), f.cols());
  const double h = g.h();
  for (int a = 0; a < g.n; ++a) {
    if (theta[a] == cplx(0.0)) continue;
    const cplx w = theta[a] / (12.0 * h);
    for (int k = 0; k < f.ncomp(); ++k) {
      const cplx* x = f.values().data() + k * g.size();
      cplx* o = out.values().data() + k * g.size();
      for (size_t i = 0; i < g.size(); ++i) {
        auto idx = g.index(i);
        auto at = [&](int off) {
          auto j = idx;
          j[a] += off;
          return x[g.node(j)];
        };
        o[i] += w * (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2));
      }
    }
  }
  return out;
}

double transport_residual_fd(const Field& C, const std::vector<Field>& A, const CVec& theta,
                             const Mask& region) {
  Field r = kI * fd_directional_derivative(C, theta) - matmul(contract(theta, A), C);
  return l2_norm(r, region);
}

TransportSolution solve_transport(const std::vector<Field>& A, const CVec& theta,
                                  const CutoffPair& cut, const TransportOptions& opt) {
  if (A.empty()) throw InputError("transport: empty potential");
  const Grid& g = cut.psi.grid();
  const int m = A[0].rows();
  for (const auto& a : A)
    if (a.grid() != g || a.rows() != m || a.cols() != m)
      throw InputError("transport: A must be m x m fields on the cutoff grid");
  SinkAntiderivative K(cut, theta);
  const Field TA = scale(cut.psi, contract(theta, A));
  const Field I = identity_field(g, m);

  auto step = [&](const Field& C, const SliceMats* frozen) {
    Field arg = matmul(TA, C);
    Field kc = scale(K.kappa(), C);
    SliceMats lam = frozen ? *frozen : sink_multiplier(K, kc, arg);
    Field src = arg - slice_right_multiply(K, kc, lam);
    return antiderivative(-kI * src, theta).value;
  };

  TransportSolution sol;
  sol.theta = theta;
  Field C = I;
  bool converged = false;
  double last = INFINITY;
  if (!opt.force_fallback) {
    double best = INFINITY;
    int best_it = 0;
    for (int it = 1; it <= opt.max_iter; ++it) {
      Field Cn = I + step(C, nullptr);
      if (!Cn.all_finite()) break;
      last = rel_diff(Cn, C);
      C = std::move(Cn);
      sol.iterations_used = it;
      if (last < opt.tol) {
        converged = true;
        break;
      }
      if (last < 0.5 * best) {
        best = last;
        best_it = it;
      } else if (it - best_it > 50 || last > 1e6) {
        break;  // stalled or diverging
      }
    }
    sol.method = "picard";
  }

  if (!converged && opt.allow_fallback) {
    // Freeze the sink multiplier, solve the linear fixed-point equation by GMRES,
    // then refresh the multiplier until it settles.
    sol.method = "gmres";
    C = I;
    SliceMats lam = sink_multiplier(K, scale(K.kappa(), C), matmul(TA, C));
    for (int outer = 0; outer < 60 && !converged; ++outer) {
      auto op = [&](const CArray& x) {
        Field X = unflatten(I, x);
        Field r = X - step(X, &lam);
        return flatten(r);
      };
      auto kr = gmres(op, flatten(I), flatten(C), 1e-13, 2000, 60);
      sol.iterations_used += kr.iterations;
      Field Cn = unflatten(I, kr.x);
      SliceMats lam_n = sink_multiplier(K, scale(K.kappa(), Cn), matmul(TA, Cn));
      double dl = 0.0, nl = 0.0;
      for (size_t s = 0; s < lam.size(); ++s) {
        dl += (lam_n[s] - lam[s]).squaredNorm();
        nl += lam_n[s].squaredNorm();
      }
      last = rel_diff(Cn, C);
      C = std::move(Cn);
      lam = std::move(lam_n);
      if (std::sqrt(dl) <= opt.tol * std::max(1.0, std::sqrt(nl)) && last < 1e-6) converged = true;
    }
  }

  sol.C = C;
  const Mask region = mask_where_one(cut.psi);
  sol.residual_norm = transport_residual(C, A, theta, region);
  const double scaleTA = l2_norm(matmul(contract(theta, A), C), region);
  sol.residual_rel = scaleTA > 0.0 ? sol.residual_norm / scaleTA : sol.residual_norm;
  if (!converged || !(sol.residual_rel <= opt.certificate_tol)) {
    throw SolverError("transport: no convergence (last update " + std::to_string(last) +
                          ", residual " + std::to_string(sol.residual_rel) +
                          "); potential too strong for this grid/method",
                      sol.residual_rel);
  }
  sol.min_abs_det = min_abs_det(C);
  return sol;
}

double phase_invariance_check(const std::vector<Field>& A, const CVec& theta,
                              const CutoffPair& cut, const std::vector<double>& omegas,
                              const TransportOptions& opt) {
  const auto base = solve_transport(A, theta, cut, opt);
  double dev = 0.0;
  for (double w : omegas) {
    const auto rot = solve_transport(A, std::exp(cplx(0, w)) * theta, cut, opt);
    dev = std::max(dev, rel_diff(rot.C, base.C));
  }
  return dev;
}

}  // namespace cgoforge
