#pragma once

#include <array>
#include <string>
#include <vector>

#include "cgoforge/cutoff.hpp"
#include "cgoforge/field.hpp"

namespace cgoforge {

// Compensated inverse of theta . d. For f it returns Kper(f - kappa P(f)), where P
// is the singular-mode projection (mean over the two in-plane axes of theta) and
// kappa is supported off the in-plane shadow of {psi = 1} with P(kappa) = 1. Hence
// theta . d K(f) = f exactly on {psi = 1}. theta must lie in a coordinate plane.
class SinkAntiderivative {
 public:
  SinkAntiderivative(const CutoffPair& cut, const CVec& theta);

  Field apply(const Field& f) const;
  Field project(const Field& f) const;  // P, per slice
  const Field& kappa() const { return kappa_; }
  const CVec& theta() const { return theta_; }
  std::array<int, 2> plane() const { return plane_; }
  // Out-of-plane slice index of each node (0 when n = 2).
  int slice_of(size_t node) const;
  int slices() const { return slices_; }

 private:
  CVec theta_;
  std::array<int, 2> plane_{};
  int slices_ = 1;
  Field kappa_;
};

struct TransportOptions {
  double tol = 1e-10;   // relative update
  int max_iter = 500;
  bool allow_fallback = true;
  bool force_fallback = false;    // skip Picard (testing)
  double certificate_tol = 1e-8;  // required residual_rel
};

struct TransportSolution {
  Field C;
  CVec theta;
  double residual_norm = 0.0;  // L^2 of i theta.dC - (theta.A)C over {psi = 1}
  double residual_rel = 0.0;   // relative to ||(theta.A)C|| there (0 if both vanish)
  double min_abs_det = 0.0;
  int iterations_used = 0;
  std::string method;          // "picard" or "gmres"
};

// Solves i theta.dC = psi (theta.A) C - kappa C Lambda with Lambda chosen per slice
// so the right side has no singular modes; on {psi = 1} this is the transport equation.
TransportSolution solve_transport(const std::vector<Field>& A, const CVec& theta,
                                  const CutoffPair& cut, const TransportOptions& opt = {});

double transport_residual(const Field& C, const std::vector<Field>& A, const CVec& theta,
                          const Mask& region);
// Same residual with a fourth-order centered finite-difference theta . d.
double transport_residual_fd(const Field& C, const std::vector<Field>& A, const CVec& theta,
                             const Mask& region);
// Fourth-order periodic finite-difference theta . d.
Field fd_directional_derivative(const Field& f, const CVec& theta);

// Max relative L^2 deviation of C(., e^{i w} theta) from C(., theta) over the list.
double phase_invariance_check(const std::vector<Field>& A, const CVec& theta,
                              const CutoffPair& cut, const std::vector<double>& omegas,
                              const TransportOptions& opt = {});

}  // namespace cgoforge
