#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cgoforge/box_fd.hpp"
#include "cgoforge/potential.hpp"
#include "cgoforge/sparse_lu.hpp"

namespace cgoforge {

struct IterativeSolvers;

// Linear boundary-to-boundary map given by its action and the action of its adjoint.
struct LinearMap {
  size_t size = 0;
  std::function<CArray(const CArray&)> apply, apply_adjoint;
};

struct DirichletSolution {
  Field u;                // on the box nodes of the grid (zero elsewhere)
  double residual = 0.0;  // relative discrete residual of the interior equations
};

// Second-order centered scheme for -Delta u - 2i sum A_k d_k u + B u = 0 on a box.
// Factorized once; solves and DtN applications are read-only afterwards.
class DirichletProblem {
 public:
  DirichletProblem(const Potential& pot, const BoxDomain& dom);
  const BoxDomain& domain() const { return dom_; }
  int m() const { return m_; }
  size_t boundary_size() const { return dom_.boundary_count() * m_; }
  size_t interior_size() const { return dom_.interior_count() * m_; }
  bool direct() const { return static_cast<bool>(lu_); }

  DirichletSolution solve(const CArray& f) const;
  CArray solve_interior(const CArray& f, double* residual = nullptr) const;
  // Lambda f = du/dn + i (A.n) u, normal derivative by the one-sided 3-point stencil.
  CArray dtn(const CArray& f) const;
  CArray dtn_adjoint(const CArray& y) const;
  LinearMap dtn_map() const;

 private:
  CArray interior_solve(const CArray& rhs, bool adjoint, double* residual) const;
  BoxDomain dom_;
  int m_;
  SpMat aii_, aib_, db_, di_;
  std::shared_ptr<SparseLu> lu_;
  std::shared_ptr<IterativeSolvers> iter_;
};

DirichletSolution solve_dirichlet(const Potential& pot, const BoxDomain& dom, const CArray& f);

struct DtnMatrix {
  Eigen::MatrixXcd matrix;  // rows/cols: boundary node * m + component
  int m = 1;
  size_t boundary_nodes = 0;
};

DtnMatrix assemble_dtn(const Potential& pot, const BoxDomain& dom, int jobs = 1);
LinearMap as_map(const DtnMatrix& d);

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
};

// Largest singular value by power iteration on M*M (deterministic start).
NormEstimate spectral_norm(const LinearMap& a, int max_iter = 300, double tol = 1e-7);
// ||L1 - L2|| / max(||L1||, ||L2||); 0 when both vanish.
double dtn_distance(const DtnMatrix& a, const DtnMatrix& b);
double dtn_distance(const LinearMap& a, const LinearMap& b);

struct DistanceEstimate {
  double relative = 0.0;  // dtn_distance
  double absolute = 0.0;  // ||L1 - L2||
  double norm_a = 0.0, norm_b = 0.0;
};
DistanceEstimate dtn_distance_estimate(const LinearMap& a, const LinearMap& b);

struct GaugeTransform {
  Field g;
  bool boundary_identity = false;
};

// g = exp(i phi H) for a real scalar field phi and a constant Hermitian H.
GaugeTransform phase_gauge(const Field& phi, const Eigen::MatrixXcd& H, bool boundary_identity);
// A2 = g^-1 A g - i g^-1 dg, V2 = g^-1 V g, converted back through V = B - sum A^2 + i sum dA.
Potential gauge_transform(const Potential& pot, const GaugeTransform& g);
// max |g - I| over box nodes within `collar` cells of the boundary.
double collar_defect(const GaugeTransform& g, const BoxDomain& dom, int collar);

struct GaugeLevel {
  int cells = 0;
  double h = 0.0;
  double distance = 0.0;           // relative
  double absolute_distance = 0.0;  // ||L1 - L2||; ||L|| itself grows like 1/h
  double norm1 = 0.0;
  double collar_defect = 0.0;
};

struct GaugeExperiment {
  std::vector<GaugeLevel> levels;
  std::vector<double> ratios;           // distance(level k) / distance(level k + 1)
  std::vector<double> absolute_ratios;  // same for the absolute distance
  std::string note;
};

struct GaugeExperimentConfig {
  int dim = 3;
  double period = 4.0;
  Box box = cube(3, 1.0, 3.0);
  std::vector<int> cells = {16, 24};
  int fine_points = 96;  // gauge algebra is done spectrally on a grid at least this fine
  int collar = 1;
};

// For each level: potentials and gauge are built on a fine periodic grid, transformed
// there, injected onto the finite-difference grid, and the two DtN maps compared.
GaugeExperiment gauge_invariance_experiment(const std::function<Potential(const Grid&)>& potential,
                                            const std::function<GaugeTransform(const Grid&)>& gauge,
                                            const GaugeExperimentConfig& cfg);

}  // namespace cgoforge
