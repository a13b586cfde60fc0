#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cgoforge/cutoff.hpp"
#include "cgoforge/jet.hpp"
#include "cgoforge/potential.hpp"
#include "cgoforge/transport.hpp"

namespace cgoforge {

// Lame parameters sampled on a periodic grid.
struct LamePair {
  Field lambda, mu;
  const Grid& grid() const { return mu.grid(); }
  // mu > 0 and 3 lambda + 2 mu > 0 at every node, both real.
  void validate() const;
};

using JetScalar = std::function<Jet(const std::array<Jet, 3>&)>;

LamePair make_lame(const Grid& g, const std::function<double(const RVec&)>& lambda,
                   const std::function<double(const RVec&)>& mu);
LamePair make_lame(const Grid& g, const JetScalar& lambda, const JetScalar& mu);
LamePair constant_lame(const Grid& g, double lambda, double mu);

// Compactly supported C-infinity bump exp(1 - 1/(1 - r^2/R^2)), 1 at the center.
double smooth_bump(const RVec& x, const RVec& center, double radius);
Jet smooth_bump(const std::array<Jet, 3>& x, const RVec& center, double radius);

// b = (mu/2)(lambda + mu)/(lambda + 2 mu); asserted positive.
Field b_field(const LamePair& p);
// (lambda + mu) mu^{1/2} / (lambda + 2 mu), the (4,4) entry of V1.
Field beta_field(const LamePair& p);

// 4x4 first-order coefficient of the reduced system:
// [[-2 mu^{1/2} Hess(mu^-1), -mu^-1 grad mu], [0, (lambda + mu)/(lambda + 2 mu) mu^{1/2}]].
Field build_v1(const LamePair& p);

// The reduced system Delta(u,f) + V1 (grad f, div u) = 0 in the form
// -Delta - 2i sum A_k d_k + B with A_k = -(i/2) V1 E_k, E_k = [[0, e_k], [e_k^t, 0]].
// B = 0: the zeroth-order coefficient is not modeled (it vanishes for constant mu).
Potential elastic_potential(const LamePair& p);

// -2 theta.dC = V1 E(theta) C on {psi = 1}.
TransportSolution elastic_transport(const LamePair& p, const CVec& theta, const CutoffPair& cut,
                                    const TransportOptions& opt = {});

enum class C00Variant {
  Beta,     // phi from the (4,4) entry of V1: theta.d phi = -beta/2
  Literal,  // phi = (theta.d)^{-1}(-psi b mu^{-1})
};

// Closed-form constant-mu transport solution [[I, 0], [phi theta^t, 1]].
Field c00_explicit(const LamePair& p, const CVec& theta, const CutoffPair& cut,
                   C00Variant variant = C00Variant::Beta);

}  // namespace cgoforge
