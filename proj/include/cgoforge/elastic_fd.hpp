#pragma once

#include <array>
#include <functional>
#include <memory>

#include <Eigen/Dense>

#include "cgoforge/box_fd.hpp"
#include "cgoforge/lame.hpp"
#include "cgoforge/sparse_lu.hpp"

namespace cgoforge {

struct ElasticIterative;

using JetVector = std::function<std::array<Jet, 3>(const std::array<Jet, 3>&)>;

struct ElasticSolution {
  Field w;                // 3 x 1 on the box nodes (corners extrapolated), zero elsewhere
  double residual = 0.0;  // relative residual of the interior equations
};

// Conservative second-order scheme for
//   sum_j (lambda w^j_j)_k + sum_j (mu (w^k_j + w^j_k))_j = F^k
// on a box built with edges (mixed differences reach edge nodes). Data live on
// face and edge nodes (layout b * 3 + k); tractions on face nodes.
class ElasticProblem {
 public:
  ElasticProblem(const LamePair& lame, const BoxDomain& dom);
  const BoxDomain& domain() const { return dom_; }
  size_t data_size() const { return dom_.boundary_count() * 3; }
  size_t traction_size() const { return dom_.face_count() * 3; }

  ElasticSolution solve(const CArray& data, const Field* forcing = nullptr) const;
  // sum_j (lambda div w) n^k + mu (w^k_j + w^j_k) n^j with one-sided normal differences.
  CArray traction(const CArray& data) const;
  CArray traction_adjoint(const CArray& y) const;

 private:
  CArray interior_solve(const Eigen::VectorXcd& rhs, bool adjoint, double* residual) const;
  BoxDomain dom_;
  SpMat aii_, aib_, tb_, ti_;
  std::shared_ptr<SparseLu> lu_;
  std::shared_ptr<ElasticIterative> iter_;
};

ElasticSolution solve_elastic(const LamePair& lame, const BoxDomain& dom, const CArray& data,
                              const Field* forcing = nullptr);

struct ElasticBoundaryMap {
  Eigen::MatrixXcd matrix;  // rows: face node * 3 + k; cols: data node * 3 + k
  size_t face_nodes = 0, data_nodes = 0;
};

ElasticBoundaryMap elastic_dtn(const LamePair& lame, const BoxDomain& dom, int jobs = 1);

// Continuum Navier operator of an analytic displacement, through jets.
Field navier_forcing(const Grid& g, const JetScalar& lambda, const JetScalar& mu, const JetVector& w);
// Discrete Navier operator at interior nodes of a nodal field (zero elsewhere).
Field navier_apply_fd(const LamePair& lame, const BoxDomain& dom, const Field& w);
// Discrete traction of a nodal field at face nodes (layout b * 3 + k).
CArray traction_fd(const LamePair& lame, const BoxDomain& dom, const Field& w);
// Second-order differences on box nodes: centered inside, one-sided on the faces.
Field box_partial(const Field& f, const BoxDomain& dom, int axis);
// Fill corner nodes by averaged linear extrapolation along the three edges.
void fill_corners(Field& w, const BoxDomain& dom);

}  // namespace cgoforge
