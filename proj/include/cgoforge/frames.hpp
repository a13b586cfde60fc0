#pragma once

#include <complex>

#include <Eigen/Dense>
#include "json.hpp"

namespace cgoforge {

using cplx = std::complex<double>;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

// Bilinear (non-Hermitian) dot product.
cplx bdot(const CVec& a, const CVec& b);

// CGO parameter bundle. theta = mu + i nu, zeta = l/2 + sqrt(tau^2 - |l|^2/4) mu,
// delta = zeta + i tau nu, delta_prime = delta - tau theta (stored exactly).
struct Frame {
  RVec mu, nu, l;
  double tau = 0.0;
  CVec theta;
  RVec zeta;
  CVec delta;
  CVec delta_prime;

  int dim() const { return static_cast<int>(mu.size()); }
  // n = 2 is accepted for smoke tests only.
  bool in_scope() const { return dim() >= 3; }
};

// Validates pairwise orthogonality, unit mu/nu (1e-12) and tau > |l|/2.
Frame build_frame(const RVec& mu, const RVec& nu, const RVec& l, double tau);

// Frame with delta = conj(f.delta) - f.l, built as (mu, -nu, -l, tau).
Frame conjugate_frame(const Frame& f);

// theta -> e^{i omega} theta, same l and tau.
Frame rotate_theta(const Frame& f, double omega);

// Frame whose theta satisfies theta . l = 0 chosen deterministically from l/|l|.
Frame frame_for_l(const RVec& l, double tau);

nlohmann::json frame_to_json(const Frame& f);
Frame frame_from_json(const nlohmann::json& j);

}  // namespace cgoforge
