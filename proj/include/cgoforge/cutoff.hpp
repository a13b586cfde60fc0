#pragma once

#include <utility>
#include <vector>

#include "cgoforge/field.hpp"

namespace cgoforge {

// C^3 septic smoothstep on [0,1]: t^4 (35 - 84 t + 70 t^2 - 20 t^3).
double smoothstep(double t);
double smoothstep_derivative(double t);
// 1 on [lo,hi], 0 outside [lo-m, hi+m], smoothstep in between.
double ramp(double x, double lo, double hi, double m);

struct CutoffPair {
  Field psi;   // 1 on omega grown by margins.first, ramps over margins.second
  Field psi0;  // 1 on omega, ramps over margins.first
  Box omega;
  std::pair<double, double> margins;
  // Per-axis factors; psi and psi0 are their tensor products.
  std::vector<std::vector<double>> psi_axis, psi0_axis;
};

// Rejects margins that do not fit inside the period; verifies nesting nodewise.
CutoffPair make_cutoffs(const Grid& g, const Box& omega, std::pair<double, double> margins);

// Tensor product of the psi factors over the listed axes only.
Field psi_profile(const CutoffPair& c, const std::vector<int>& axes);

}  // namespace cgoforge
