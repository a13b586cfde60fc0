#pragma once

#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "cgoforge/frames.hpp"

namespace cgoforge {

using SpMat = Eigen::SparseMatrix<cplx>;

struct SparseLuOptions {
  bool symmetric_strategy = false;  // AMD on A + A^t, diagonal pivots preferred
  int ordering = 3;                 // UMFPACK ordering code (3: METIS), -1 for the library default
};

// UMFPACK factorization of a square complex sparse matrix; solves with A or A^H.
// Matrices with no imaginary part are factored in real arithmetic.
class SparseLu {
 public:
  explicit SparseLu(const SpMat& a, const SparseLuOptions& opt = {});
  ~SparseLu();
  SparseLu(const SparseLu&) = delete;
  SparseLu& operator=(const SparseLu&) = delete;

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b, bool adjoint = false) const;
  // max |U_ii| / min |U_ii| over the factor's pivots, and the smallest pivot.
  double pivot_ratio() const { return pivot_ratio_; }
  double min_pivot() const { return min_pivot_; }
  bool real_arithmetic() const { return real_; }

 private:
  SpMat a_;
  bool real_ = false;
  std::vector<double> re_;
  void* symbolic_ = nullptr;
  void* numeric_ = nullptr;
  double pivot_ratio_ = 0.0, min_pivot_ = 0.0;
};

}  // namespace cgoforge
