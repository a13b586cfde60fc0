#pragma once

#include <functional>
#include <vector>

#include "cgoforge/frames.hpp"

namespace cgoforge {

using CArray = std::vector<cplx>;

struct KrylovResult {
  CArray x;
  double relative_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Restarted GMRES for A x = b with a matrix-free operator.
KrylovResult gmres(const std::function<CArray(const CArray&)>& apply, const CArray& b,
                   const CArray& x0, double tol, int max_iter, int restart = 40);

}  // namespace cgoforge
