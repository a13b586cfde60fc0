#pragma once

#include <vector>

#include "cgoforge/frames.hpp"

namespace cgoforge {

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least-squares slope of log(value) against log(tau). Needs >= 3 positive samples.
DecayFit fit_decay_order(const std::vector<double>& taus, const std::vector<double>& values);

struct PowerFit {
  std::vector<int> powers;          // exponents of tau, descending
  std::vector<cplx> coefficients;   // one per power
  double condition_number = 0.0;    // of the scaled design matrix
  double residual = 0.0;            // relative l2 misfit
  bool ill_conditioned = false;
};

// Complex least squares values ~ sum_p c_p tau^p, solved in tau/tau_ref so the
// design stays well scaled (tau_ref = geometric mean of the samples).
PowerFit fit_powers(const std::vector<double>& taus, const std::vector<cplx>& values,
                    const std::vector<int>& powers);

}  // namespace cgoforge
