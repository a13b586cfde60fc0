#include "cgoforge/sparse_lu.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

#include <suitesparse/umfpack.h>

#include "cgoforge/error.hpp"

namespace cgoforge {

namespace {

using Long = SuiteSparse_long;

// Set once a real factorization fails its probe; later real matrices go straight to complex.
std::atomic<bool> real_kernels_broken{false};

const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

void check(Long status, const char* step) {
  if (status == UMFPACK_OK) return;
  std::ostringstream os;
  os << "sparse LU: " << step << " failed (umfpack status " << status << ")";
  if (status == UMFPACK_WARNING_singular_matrix) os << ": singular matrix";
  throw SolverError(os.str(), INFINITY);
}

struct Pattern {
  std::vector<Long> ap, ai;
  explicit Pattern(const SpMat& a)
      : ap(a.outerIndexPtr(), a.outerIndexPtr() + a.cols() + 1),
        ai(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros()) {}
};

}  // namespace

SparseLu::SparseLu(const SpMat& a, const SparseLuOptions& opt) : a_(a) {
  if (a_.rows() != a_.cols()) throw InputError("sparse LU: matrix must be square");
  a_.makeCompressed();
  const auto n = static_cast<Long>(a_.rows());
  const Pattern pat(a_);
  real_ = !real_kernels_broken.load();
  for (Eigen::Index k = 0; k < a_.nonZeros() && real_; ++k) real_ = a_.valuePtr()[k].imag() == 0.0;

  double control[UMFPACK_CONTROL];
  if (real_)
    umfpack_dl_defaults(control);
  else
    umfpack_zl_defaults(control);
  if (opt.symmetric_strategy) control[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
  if (opt.ordering >= 0) control[UMFPACK_ORDERING] = opt.ordering;

  double info[UMFPACK_INFO];
  Long st = 0;
  if (real_) {
    re_.resize(static_cast<size_t>(a_.nonZeros()));
    for (size_t k = 0; k < re_.size(); ++k) re_[k] = a_.valuePtr()[k].real();
    check(umfpack_dl_symbolic(n, n, pat.ap.data(), pat.ai.data(), re_.data(), &symbolic_, control, info),
          "symbolic analysis");
    st = umfpack_dl_numeric(pat.ap.data(), pat.ai.data(), re_.data(), symbolic_, &numeric_, control, info);
    // Some BLAS builds miscompute the real dense kernels on some CPUs; probe the
    // factorization and redo it in complex arithmetic if it fails.
    bool ok = st == UMFPACK_OK;
    if (ok) {
      Eigen::VectorXcd b(n);
      for (Long i = 0; i < n; ++i) b[i] = std::cos(0.7 * static_cast<double>(i) + 0.3);
      const Eigen::VectorXcd x = solve(b, false);
      ok = (a_ * x - b).norm() <= 1e-8 * b.norm();
    }
    if (!ok) {
      if (st == UMFPACK_OK) real_kernels_broken = true;
      if (numeric_) umfpack_dl_free_numeric(&numeric_);
      umfpack_dl_free_symbolic(&symbolic_);
      numeric_ = symbolic_ = nullptr;
      real_ = false;
      re_.clear();
      umfpack_zl_defaults(control);
      if (opt.symmetric_strategy) control[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
      if (opt.ordering >= 0) control[UMFPACK_ORDERING] = opt.ordering;
    }
  }
  if (!real_) {
    check(umfpack_zl_symbolic(n, n, pat.ap.data(), pat.ai.data(), raw(a_.valuePtr()), nullptr, &symbolic_,
                              control, info),
          "symbolic analysis");
    st = umfpack_zl_numeric(pat.ap.data(), pat.ai.data(), raw(a_.valuePtr()), nullptr, symbolic_, &numeric_,
                            control, info);
  }
  min_pivot_ = info[UMFPACK_UMIN];
  pivot_ratio_ = info[UMFPACK_UMIN] > 0 ? info[UMFPACK_UMAX] / info[UMFPACK_UMIN] : INFINITY;
  if (st == UMFPACK_WARNING_singular_matrix) {
    std::ostringstream os;
    os << "sparse LU: singular discrete system (smallest pivot " << min_pivot_ << ")";
    throw SolverError(os.str(), INFINITY);
  }
  check(st, "numeric factorization");
}

SparseLu::~SparseLu() {
  if (real_) {
    if (numeric_) umfpack_dl_free_numeric(&numeric_);
    if (symbolic_) umfpack_dl_free_symbolic(&symbolic_);
  } else {
    if (numeric_) umfpack_zl_free_numeric(&numeric_);
    if (symbolic_) umfpack_zl_free_symbolic(&symbolic_);
  }
}

Eigen::VectorXcd SparseLu::solve(const Eigen::VectorXcd& b, bool adjoint) const {
  const auto n = static_cast<Long>(a_.rows());
  const Pattern pat(a_);
  Eigen::VectorXcd x(b.size());
  double info[UMFPACK_INFO];
  if (real_) {
    // A is real, so A^H = A^t and the real and imaginary parts solve separately.
    Eigen::VectorXd br = b.real(), bi = b.imag(), xr(b.size()), xi(b.size());
    const int sys = adjoint ? UMFPACK_At : UMFPACK_A;
    check(umfpack_dl_solve(sys, pat.ap.data(), pat.ai.data(), re_.data(), xr.data(), br.data(), numeric_,
                           nullptr, info),
          "solve");
    check(umfpack_dl_solve(sys, pat.ap.data(), pat.ai.data(), re_.data(), xi.data(), bi.data(), numeric_,
                           nullptr, info),
          "solve");
    x.real() = xr;
    x.imag() = xi;
    return x;
  }
  check(umfpack_zl_solve(adjoint ? UMFPACK_At : UMFPACK_A, pat.ap.data(), pat.ai.data(), raw(a_.valuePtr()),
                         nullptr, raw(x.data()), nullptr, raw(b.data()), nullptr, numeric_, nullptr, info),
        "solve");
  return x;
}

}  // namespace cgoforge
