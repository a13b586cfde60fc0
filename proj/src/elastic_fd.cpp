#include "cgoforge/elastic_fd.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include <Eigen/IterativeLinearSolvers>

#include "cgoforge/error.hpp"

namespace cgoforge {

namespace {

using Triplets = std::vector<Eigen::Triplet<cplx>>;
using Idx = std::array<int, 3>;

Eigen::VectorXcd to_vec(const CArray& a) {
  return Eigen::Map<const Eigen::VectorXcd>(a.data(), static_cast<Eigen::Index>(a.size()));
}
CArray to_array(const Eigen::VectorXcd& v) { return CArray(v.data(), v.data() + v.size()); }

size_t elastic_direct_limit() { return static_cast<size_t>(40000); }

Idx shift(Idx li, int a, int s) {
  li[a] += s;
  return li;
}

struct Coefficients {
  const BoxDomain& dom;
  const LamePair& lame;
  double lambda(const Idx& li) const { return lame.lambda.at(dom.grid_node(li)).real(); }
  double mu(const Idx& li) const { return lame.mu.at(dom.grid_node(li)).real(); }
};

// Emits -(discrete Navier operator) for component k at interior node li as put(node, comp, coef).
template <class Put>
void navier_row(const Coefficients& cf, const Idx& li, int k, double h, Put&& put) {
  const double h2 = h * h;
  // s * d_a (c d_b w^comp)
  auto term = [&](int a, int b, bool use_lambda, int comp, double s) {
    auto c = [&](const Idx& x) { return use_lambda ? cf.lambda(x) : cf.mu(x); };
    if (a == b) {
      const Idx lp = shift(li, a, 1), lm = shift(li, a, -1);
      const double c0 = c(li), cp = 0.5 * (c0 + c(lp)), cm = 0.5 * (c0 + c(lm));
      put(lp, comp, s * cp / h2);
      put(li, comp, -s * (cp + cm) / h2);
      put(lm, comp, s * cm / h2);
      return;
    }
    for (int sa : {1, -1}) {
      const Idx la = shift(li, a, sa);
      const double ca = c(la);
      for (int sb : {1, -1}) put(shift(la, b, sb), comp, s * sa * sb * ca / (4.0 * h2));
    }
  };
  for (int j = 0; j < 3; ++j) {
    term(k, j, true, j, -1.0);
    term(j, j, false, k, -1.0);
    term(j, k, false, j, -1.0);
  }
}

// Emits the traction component k at face node li (outward normal s e_d).
template <class Put>
void traction_row(const Coefficients& cf, const Idx& li, int d, int s, int k, double h, Put&& put) {
  auto deriv = [&](int a, int comp, double factor) {
    if (a == d) {
      put(li, comp, factor * s * 1.5 / h);
      put(shift(li, d, -s), comp, -factor * s * 2.0 / h);
      put(shift(li, d, -2 * s), comp, factor * s * 0.5 / h);
    } else {
      put(shift(li, a, 1), comp, factor * 0.5 / h);
      put(shift(li, a, -1), comp, -factor * 0.5 / h);
    }
  };
  const double lam = cf.lambda(li), mu = cf.mu(li);
  if (k == d)
    for (int j = 0; j < 3; ++j) deriv(j, j, s * lam);
  deriv(d, k, s * mu);
  deriv(k, d, s * mu);
}

void check_domain(const LamePair& lame, const BoxDomain& dom) {
  lame.validate();
  if (dom.dim() != 3) throw InputError("elastic: requires n = 3");
  if (lame.grid() != dom.grid) throw InputError("elastic: Lame grid differs from domain grid");
  if (dom.boundary_count() == dom.face_count())
    throw InputError("elastic: box domain must carry edge nodes (BoxDomain::make(g, box, true))");
}

}  // namespace

struct ElasticIterative {
  Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<cplx>> forward, adjoint;
  SpMat aii_adj;
};

ElasticProblem::ElasticProblem(const LamePair& lame, const BoxDomain& dom) : dom_(dom) {
  check_domain(lame, dom);
  const Coefficients cf{dom_, lame};
  const auto ni = static_cast<Eigen::Index>(dom_.interior_count() * 3);
  const auto nb = static_cast<Eigen::Index>(data_size());
  const auto nf = static_cast<Eigen::Index>(traction_size());
  Triplets tii, tib, ttb, tti;
  tii.reserve(static_cast<size_t>(ni) * 40);

  auto putter = [&](Triplets& tin, Triplets& tbd, Eigen::Index row) {
    return [&, row](const Idx& li, int comp, double v) {
      const int role = dom_.role(li);
      if (role >= 0)
        tin.emplace_back(row, static_cast<Eigen::Index>(role) * 3 + comp, v);
      else if (role <= -2)
        tbd.emplace_back(row, static_cast<Eigen::Index>(-2 - role) * 3 + comp, v);
      else
        throw SolverError("elastic: stencil reached a corner node", 0.0);
    };
  };
  for (size_t i = 0; i < dom_.interior_count(); ++i)
    for (int k = 0; k < 3; ++k)
      navier_row(cf, dom_.interior_local[i], k, dom_.h, putter(tii, tib, static_cast<Eigen::Index>(i) * 3 + k));
  for (size_t b = 0; b < dom_.face_count(); ++b) {
    const int d = dom_.face[b] / 2, s = dom_.face[b] % 2 ? 1 : -1;
    for (int k = 0; k < 3; ++k)
      traction_row(cf, dom_.boundary_local[b], d, s, k, dom_.h, putter(tti, ttb, static_cast<Eigen::Index>(b) * 3 + k));
  }
  aii_.resize(ni, ni);
  aii_.setFromTriplets(tii.begin(), tii.end());
  aib_.resize(ni, nb);
  aib_.setFromTriplets(tib.begin(), tib.end());
  tb_.resize(nf, nb);
  tb_.setFromTriplets(ttb.begin(), ttb.end());
  ti_.resize(nf, ni);
  ti_.setFromTriplets(tti.begin(), tti.end());
  aii_.makeCompressed();

  if (static_cast<size_t>(ni) <= elastic_direct_limit()) {
    try {
      lu_ = std::make_shared<SparseLu>(aii_);
    } catch (const SolverError& e) {
      throw SolverError(std::string("elastic: ") + e.what(), e.last_residual());
    }
  } else {
    auto it = std::make_shared<ElasticIterative>();
    it->aii_adj = aii_.adjoint();
    for (auto* s : {&it->forward, &it->adjoint}) {
      s->setTolerance(1e-11);
      s->setMaxIterations(4000);
    }
    it->forward.compute(aii_);
    it->adjoint.compute(it->aii_adj);
    iter_ = it;
  }
}

CArray ElasticProblem::interior_solve(const Eigen::VectorXcd& b, bool adjoint, double* residual) const {
  Eigen::VectorXcd x;
  if (lu_)
    x = lu_->solve(b, adjoint);
  else
    x = adjoint ? Eigen::VectorXcd(iter_->adjoint.solve(b)) : Eigen::VectorXcd(iter_->forward.solve(b));
  const double nb = b.norm();
  const double res =
      nb == 0.0 ? 0.0 : (adjoint ? (aii_.adjoint() * x - b).norm() : (aii_ * x - b).norm()) / nb;
  if (!(res <= 1e-8)) {
    std::ostringstream os;
    os << "elastic: discrete system near-singular (relative residual " << res << ")";
    throw SolverError(os.str(), res);
  }
  if (residual) *residual = res;
  return to_array(x);
}

ElasticSolution ElasticProblem::solve(const CArray& data, const Field* forcing) const {
  if (data.size() != data_size()) throw InputError("elastic: boundary data has wrong length");
  Eigen::VectorXcd rhs = -(aib_ * to_vec(data));
  if (forcing) {
    if (forcing->grid() != dom_.grid || forcing->rows() != 3 || forcing->cols() != 1)
      throw InputError("elastic: forcing must be a 3 x 1 field on the domain grid");
    for (size_t i = 0; i < dom_.interior_count(); ++i)
      for (int k = 0; k < 3; ++k) rhs[static_cast<Eigen::Index>(i * 3 + k)] -= forcing->at(dom_.interior[i], k);
  }
  ElasticSolution s{Field(dom_.grid, 3, 1), 0.0};
  const CArray ui = interior_solve(rhs, false, &s.residual);
  for (size_t i = 0; i < dom_.interior_count(); ++i)
    for (int k = 0; k < 3; ++k) s.w.at(dom_.interior[i], k) = ui[i * 3 + k];
  for (size_t b = 0; b < dom_.boundary_count(); ++b)
    for (int k = 0; k < 3; ++k) s.w.at(dom_.boundary[b], k) = data[b * 3 + k];
  fill_corners(s.w, dom_);
  return s;
}

CArray ElasticProblem::traction(const CArray& data) const {
  if (data.size() != data_size()) throw InputError("elastic: boundary data has wrong length");
  const Eigen::VectorXcd f = to_vec(data);
  const CArray ui = interior_solve(-(aib_ * f), false, nullptr);
  return to_array(tb_ * f + ti_ * to_vec(ui));
}

CArray ElasticProblem::traction_adjoint(const CArray& y) const {
  if (y.size() != traction_size()) throw InputError("elastic: traction vector has wrong length");
  const Eigen::VectorXcd yv = to_vec(y);
  const CArray w = interior_solve(ti_.adjoint() * yv, true, nullptr);
  return to_array(tb_.adjoint() * yv - aib_.adjoint() * to_vec(w));
}

ElasticSolution solve_elastic(const LamePair& lame, const BoxDomain& dom, const CArray& data,
                              const Field* forcing) {
  return ElasticProblem(lame, dom).solve(data, forcing);
}

ElasticBoundaryMap elastic_dtn(const LamePair& lame, const BoxDomain& dom, int jobs) {
  const ElasticProblem prob(lame, dom);
  ElasticBoundaryMap m;
  m.face_nodes = dom.face_count();
  m.data_nodes = dom.boundary_count();
  const size_t nc = prob.data_size();
  m.matrix.resize(static_cast<Eigen::Index>(prob.traction_size()), static_cast<Eigen::Index>(nc));
  jobs = std::max(1, jobs);
  auto work = [&](size_t start) {
    CArray e(nc, 0.0);
    for (size_t j = start; j < nc; j += static_cast<size_t>(jobs)) {
      e[j] = 1.0;
      m.matrix.col(static_cast<Eigen::Index>(j)) = to_vec(prob.traction(e));
      e[j] = 0.0;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(work, static_cast<size_t>(t));
  work(0);
  for (auto& t : pool) t.join();
  if (!m.matrix.allFinite()) throw SolverError("elastic: non-finite traction map", 0.0);
  return m;
}

Field navier_forcing(const Grid& g, const JetScalar& lambda, const JetScalar& mu, const JetVector& w) {
  if (g.n != 3) throw InputError("elastic: requires n = 3");
  Field out(g, 3, 1);
  for (size_t q = 0; q < g.size(); ++q) {
    const RVec x = g.point(q);
    const auto X = jet_point(x[0], x[1], x[2]);
    const Jet l = lambda(X), m = mu(X);
    const auto u = w(X);
    double div = 0.0;
    for (int j = 0; j < 3; ++j) div += u[j].d(j);
    for (int k = 0; k < 3; ++k) {
      double v = l.d(k) * div;
      for (int j = 0; j < 3; ++j) {
        v += l.v * u[j].dd(j, k);
        v += m.d(j) * (u[k].d(j) + u[j].d(k));
        v += m.v * (u[k].dd(j, j) + u[j].dd(j, k));
      }
      out.at(q, k) = v;
    }
  }
  return out;
}

Field navier_apply_fd(const LamePair& lame, const BoxDomain& dom, const Field& w) {
  check_domain(lame, dom);
  const Coefficients cf{dom, lame};
  Field out(dom.grid, 3, 1);
  for (size_t i = 0; i < dom.interior_count(); ++i)
    for (int k = 0; k < 3; ++k) {
      cplx acc = 0.0;
      navier_row(cf, dom.interior_local[i], k, dom.h,
                 [&](const Idx& li, int comp, double v) { acc -= v * w.at(dom.grid_node(li), comp); });
      out.at(dom.interior[i], k) = acc;
    }
  return out;
}

CArray traction_fd(const LamePair& lame, const BoxDomain& dom, const Field& w) {
  check_domain(lame, dom);
  const Coefficients cf{dom, lame};
  CArray out(dom.face_count() * 3, 0.0);
  for (size_t b = 0; b < dom.face_count(); ++b) {
    const int d = dom.face[b] / 2, s = dom.face[b] % 2 ? 1 : -1;
    for (int k = 0; k < 3; ++k)
      traction_row(cf, dom.boundary_local[b], d, s, k, dom.h,
                   [&](const Idx& li, int comp, double v) { out[b * 3 + k] += v * w.at(dom.grid_node(li), comp); });
  }
  return out;
}

Field box_partial(const Field& f, const BoxDomain& dom, int axis) {
  Field out(f.grid(), f.rows(), f.cols());
  const double h = dom.h;
  const int c0 = dom.cells[0], c1 = dom.cells[1], c2 = dom.cells[2];
  Idx li{0, 0, 0};
  for (li[0] = 0; li[0] <= c0; ++li[0])
    for (li[1] = 0; li[1] <= c1; ++li[1])
      for (li[2] = 0; li[2] <= c2; ++li[2]) {
        const size_t q = dom.grid_node(li);
        const int j = li[axis], c = dom.cells[axis];
        for (int r = 0; r < f.rows(); ++r)
          for (int cc = 0; cc < f.cols(); ++cc) {
            auto v = [&](int s) { return f.at(dom.grid_node(shift(li, axis, s)), r, cc); };
            cplx d;
            if (j == 0)
              d = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
            else if (j == c)
              d = (3.0 * v(0) - 4.0 * v(-1) + v(-2)) / (2.0 * h);
            else
              d = (v(1) - v(-1)) / (2.0 * h);
            out.at(q, r, cc) = d;
          }
      }
  return out;
}

void fill_corners(Field& w, const BoxDomain& dom) {
  for (int corner = 0; corner < 8; ++corner) {
    Idx li{0, 0, 0}, inward{0, 0, 0};
    for (int a = 0; a < 3; ++a) {
      const bool hi = (corner >> a) & 1;
      li[a] = hi ? dom.cells[a] : 0;
      inward[a] = hi ? -1 : 1;
    }
    const size_t q = dom.grid_node(li);
    for (int r = 0; r < w.rows(); ++r) {
      cplx acc = 0.0;
      for (int a = 0; a < 3; ++a)
        acc += 2.0 * w.at(dom.grid_node(shift(li, a, inward[a])), r) -
               w.at(dom.grid_node(shift(li, a, 2 * inward[a])), r);
      w.at(q, r) = acc / 3.0;
    }
  }
}

}  // namespace cgoforge
