#pragma once

#include <string>
#include <vector>

#include "cgoforge/cgo.hpp"
#include "cgoforge/elastic_fd.hpp"
#include "cgoforge/fit.hpp"
#include "cgoforge/lame.hpp"

namespace cgoforge {

// w = mu^{-1/2} u + mu^{-1} grad f - f grad mu^{-1} with spectral gradients.
Field aity_reduce(const Field& u, const Field& f, const Field& mu);
// The same for w = e^{i delta.x} W, (u, f) = e^{i delta.x} (r, s): returns W.
Field aity_reduce_amplitude(const Field& r, const Field& s, const Field& mu, const CVec& delta);
// The same on box nodes with second-order box differences.
Field aity_reduce_fd(const Field& u, const Field& f, const Field& mu, const BoxDomain& dom);

struct Strain {
  Field div;  // scalar
  Field eps;  // 3 x 3, eps_jk = w^k_j + w^j_k
};
// Spectral, with d -> d + i delta (delta = 0 for plain periodic fields).
Strain strain_spectral(const Field& w, const CVec& delta);
Strain strain_fd(const Field& w, const BoxDomain& dom);

// Trapezoidal quadrature over omega of
// phase [(lambda2 - lambda1) conj(div2) div1 + 1/2 (mu2 - mu1) sum conj(eps2) eps1].
cplx h_integral(const LamePair& lame1, const LamePair& lame2, const Strain& s1, const Strain& s2,
                const Box& omega, const Field* phase = nullptr);
// H(w2, w1) for periodic fields (spectral derivatives).
cplx h_functional(const LamePair& lame1, const LamePair& lame2, const Field& w1, const Field& w2,
                  const Box& omega);
// H(w2, w1) for nodal fields on a box (box differences).
cplx h_functional_fd(const LamePair& lame1, const LamePair& lame2, const Field& w1, const Field& w2,
                     const BoxDomain& dom);
// h^2 sum over face nodes of a . conj(b); a is a traction vector, b data (faces first).
cplx face_pairing(const BoxDomain& dom, const CArray& a, const CArray& b);
// Trapezoid rule over the closed faces: edge nodes carry weight h^2/2 per adjacent face,
// with that face's traction extrapolated linearly from its own nodes; corners are dropped
// (an O(h^2) term). Equals face_pairing when the data vanish on the edges.
cplx boundary_pairing(const BoxDomain& dom, const CArray& traction, const CArray& data);

struct GreenCheck {
  cplx volume = 0.0;    // H(w2, w1) from the discrete solutions
  cplx boundary = 0.0;  // conj(<L2 h2, h1>) - <L1 h1, h2>, closed-face trapezoid
  double difference = 0.0;
};
// Solves with data h1 for lame1 and h2 for lame2 and compares both sides.
GreenCheck h_green_check(const LamePair& lame1, const LamePair& lame2, const BoxDomain& dom,
                         const CArray& h1, const CArray& h2);

// Navier operator of e^{i delta.x} W, divided by the phase (spectral).
Field navier_amplitude(const LamePair& lame, const Field& W, const CVec& delta);

struct ElasticCgo {
  CgoExpansion expansion;  // amplitude (r, s) of (u, f) = e^{i delta.x}(r, s)
  Field r, s;              // summed expansion, split
  Field W;                 // reduced amplitude, w = e^{i delta.x} W
  double system_residual = 0.0;   // L^2 of the reduced-system residual on {psi = 1}
  double reduced_residual = 0.0;  // L^2 of the Navier residual of w on {psi = 1}, over |delta|^2 ||W||
};
// Runs the expansion on the reduced system with constant p, then reduces to w.
ElasticCgo cgo_elastic_solution(const LamePair& lame, const Frame& frame, const CVec& p, int n,
                                const CutoffPair& cut, const CgoOptions& opt = {},
                                const TransportSolution* c0 = nullptr);

struct VMatrix {
  Field V;  // 2 x 2
  Field a1, a2, b1, b2;
};
// a_j = (theta.d)^2 mu_j^{-1}, b_j = (mu_j/2)(lambda_j + mu_j)/(lambda_j + 2 mu_j);
// V11 = (lambda1 + mu1 - lambda2 - mu2) (mu1 mu2)^{1/2} / ((lambda1 + 2 mu1)(lambda2 + 2 mu2)),
// V12 = 2 (1/mu2 - 1/mu1) mu2^{-1/2} psi theta.d b2, V21 likewise with index 1,
// V22 = 2 (1/mu2 - 1/mu1)(b1 a1 + b2 a2). psi multiplies the b-derivatives when given.
VMatrix v_matrix(const LamePair& lame1, const LamePair& lame2, const CVec& theta,
                 const Field* psi = nullptr);

struct H2Direct {
  cplx value = 0.0;      // sign matched to the tau^2 coefficient of H(w2, w1)
  cplx displayed = 0.0;  // the displayed integral as written (opposite sign)
};
// Integral over omega of e^{il.x} (theta.conj(r2), conj(s2)) V (theta.r1, s1)^t with
// (r_j, s_j) the leading amplitudes C_j p (C_2 for the conjugate frame).
H2Direct h2_direct(const LamePair& lame1, const LamePair& lame2, const Frame& frame, const Field& C1,
                   const Field& C2, const CVec& p, const Box& omega, const Field* psi = nullptr);

struct HSeries {
  std::vector<double> taus;
  std::vector<cplx> values;
  PowerFit fit;
  cplx h2 = 0.0, h1 = 0.0, h0 = 0.0;
  bool flagged = false;  // ill-conditioned: only H2, H1, H0 kept
  std::string note;
};

struct HSeriesConfig {
  RVec l;                      // frequency; theta chosen from l/|l|
  std::vector<double> taus;
  CVec p;                      // constant 4-vector
  int order = 0;               // expansion order n
  int coefficients = 3;        // powers 2, 1, 0, -1, ...
  Box omega;
  std::pair<double, double> margins{0.25, 0.5};
  CgoOptions cgo;
  int jobs = 1;
};

struct HSeriesResult {
  HSeries series;
  H2Direct direct;
  Frame frame;  // at the first tau
};

// Solutions with delta1 = delta and delta2 = conj(delta) - l; transports are tau-free and
// computed once per pair.
HSeriesResult h_series_fit(const LamePair& lame1, const LamePair& lame2, const HSeriesConfig& cfg);
// Least squares in powers 2, 1, 0, -1, ... of tau; ill-conditioned fits are refit with 3 terms.
HSeries fit_h_series(const std::vector<double>& taus, const std::vector<cplx>& values, int coefficients);

struct QuarticStudy {
  std::vector<double> lnorms;
  std::vector<cplx> h0;          // fitted H0 per |l|
  std::vector<cplx> normalized;  // H0 / integral of e^{il.x} over omega
  double c_fit = 0.0;            // least squares c in normalized = c |l|^4
  double c_expected = 0.0;       // (mu2 - mu1) / (2 mu1 mu2)
  double relative_error = 0.0;
};
// Constant Lame pairs, p = (0,0,0,1), l = |l| * direction.
QuarticStudy h0_quartic_study(const Grid& g, double lambda1, double mu1, double lambda2, double mu2,
                              const RVec& direction, const std::vector<double>& lnorms,
                              const HSeriesConfig& base);
// Exact integral of e^{il.x} over an axis-aligned box.
cplx box_fourier_integral(const Box& b, const RVec& l);

}  // namespace cgoforge
