#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cgoforge/lame.hpp"

namespace cgoforge {

// b1^{1/2}(theta.d)^2(b1^{-1/2}) - b1 (theta.d)^2(mu1^{-1}) minus the same for pair 2.
Field er2_identity_gap(const LamePair& lame1, const LamePair& lame2, const CVec& theta);

// The gap is theta^t G theta with G symmetric; for theta.theta = 0 only the traceless
// part is visible, with coordinates (G11 - g, G22 - g, G12, G13, G23), g = tr G / 3.
std::array<cplx, 5> traceless_components(const Eigen::Matrix3cd& G);
// Row of the sampling system: theta^t Q_c theta for the five basis matrices.
Eigen::Matrix<cplx, 1, 5> theta_monomials(const CVec& theta);

struct ThetaComponents {
  std::vector<Field> components;  // five scalar fields
  std::vector<CVec> thetas;
  double condition = 0.0;             // of the sampling matrix
  double reconstruction_error = 0.0;  // max |M c - gap| / max |gap| over samples and nodes
};

// Needs >= 5 null vectors (theta.theta = 0) whose monomials have full rank.
ThetaComponents identity_theta_components(const LamePair& lame1, const LamePair& lame2,
                                          const std::vector<CVec>& thetas);
// e1 +- i e2, e1 +- i e3, e2 +- i e3.
std::vector<CVec> default_theta_samples();

struct WeightedRatioRow {
  double alpha = 0.0;
  double numerator = 0.0;    // ||lambda1 + mu1 - lambda2 - mu2||_alpha
  double denominator = 0.0;  // ||mu1 - mu2||_alpha
  double ratio = 0.0;        // infinite when only the denominator vanishes, 0 when both do
  bool infinite = false;
};

std::vector<WeightedRatioRow> weighted_ratio_probe(const LamePair& lame1, const LamePair& lame2,
                                                   const std::vector<double>& alphas, const Box& box);

}  // namespace cgoforge
