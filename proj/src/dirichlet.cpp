#include "cgoforge/dirichlet.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/IterativeLinearSolvers>

#include "cgoforge/error.hpp"
#include "cgoforge/spectral.hpp"

namespace cgoforge {

namespace {

using Triplets = std::vector<Eigen::Triplet<cplx>>;
using CMap = Eigen::Map<Eigen::VectorXcd>;
using CCMap = Eigen::Map<const Eigen::VectorXcd>;

Eigen::VectorXcd to_vec(const CArray& a) { return CCMap(a.data(), static_cast<Eigen::Index>(a.size())); }
CArray to_array(const Eigen::VectorXcd& v) { return CArray(v.data(), v.data() + v.size()); }

size_t direct_limit(int m) { return static_cast<size_t>(32 * 32 * 32) * m; }

}  // namespace

// Iterative fallback for systems beyond the direct-solve size.
struct IterativeSolvers {
  Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<cplx>> forward, adjoint;
  SpMat aii_adj;
};

DirichletProblem::DirichletProblem(const Potential& pot, const BoxDomain& dom) : dom_(dom), m_(pot.m) {
  pot.validate();
  if (pot.grid() != dom.grid) throw InputError("dirichlet: potential grid differs from domain grid");
  const int n = dom.dim();
  const int m = m_;
  const double h = dom.h, h2 = h * h;
  const auto ni = static_cast<Eigen::Index>(interior_size());
  const auto nb = static_cast<Eigen::Index>(boundary_size());
  Triplets tii, tib, tdb, tdi;
  tii.reserve(static_cast<size_t>(ni) * (2 * n + 1) * m);

  auto put = [&](Triplets& tin, Triplets& tbd, Eigen::Index row, const std::array<int, 3>& li, int c, cplx v) {
    const int role = dom_.role(li);
    if (role >= 0)
      tin.emplace_back(row, static_cast<Eigen::Index>(role) * m + c, v);
    else if (role <= -2)
      tbd.emplace_back(row, static_cast<Eigen::Index>(-2 - role) * m + c, v);
    else
      throw SolverError("dirichlet: stencil reached an edge node", 0.0);
  };

  for (size_t i = 0; i < dom_.interior_count(); ++i) {
    const auto li = dom_.interior_local[i];
    const size_t gn = dom_.interior[i];
    for (int r = 0; r < m; ++r) {
      const Eigen::Index row = static_cast<Eigen::Index>(i) * m + r;
      put(tii, tib, row, li, r, 2.0 * n / h2);
      for (int c = 0; c < m; ++c) {
        const cplx b = pot.B.at(gn, r, c);
        if (b != cplx(0.0)) put(tii, tib, row, li, c, b);
      }
      for (int k = 0; k < n; ++k) {
        auto lp = li, lm = li;
        ++lp[k];
        --lm[k];
        put(tii, tib, row, lp, r, -1.0 / h2);
        put(tii, tib, row, lm, r, -1.0 / h2);
        for (int c = 0; c < m; ++c) {
          const cplx a = pot.A[k].at(gn, r, c);
          if (a == cplx(0.0)) continue;
          put(tii, tib, row, lp, c, cplx(0, -1) * a / h);
          put(tii, tib, row, lm, c, cplx(0, 1) * a / h);
        }
      }
    }
  }
  for (size_t b = 0; b < dom_.boundary_count(); ++b) {
    const auto li = dom_.boundary_local[b];
    const int axis = dom_.face[b] / 2;
    const int s = dom_.face[b] % 2 ? 1 : -1;
    const size_t gn = dom_.boundary[b];
    for (int r = 0; r < m; ++r) {
      const Eigen::Index row = static_cast<Eigen::Index>(b) * m + r;
      auto l1 = li, l2 = li;
      l1[axis] -= s;
      l2[axis] -= 2 * s;
      put(tdi, tdb, row, li, r, 1.5 / h);
      put(tdi, tdb, row, l1, r, -2.0 / h);
      put(tdi, tdb, row, l2, r, 0.5 / h);
      for (int c = 0; c < m; ++c) {
        const cplx a = pot.A[axis].at(gn, r, c);
        if (a != cplx(0.0)) put(tdi, tdb, row, li, c, cplx(0, s) * a);
      }
    }
  }
  aii_.resize(ni, ni);
  aii_.setFromTriplets(tii.begin(), tii.end());
  aib_.resize(ni, nb);
  aib_.setFromTriplets(tib.begin(), tib.end());
  db_.resize(nb, nb);
  db_.setFromTriplets(tdb.begin(), tdb.end());
  di_.resize(nb, ni);
  di_.setFromTriplets(tdi.begin(), tdi.end());
  aii_.makeCompressed();

  if (interior_size() <= direct_limit(m)) {
    try {
      lu_ = std::make_shared<SparseLu>(aii_);
    } catch (const SolverError& e) {
      throw SolverError(std::string("dirichlet: ") + e.what() + " (a Dirichlet eigenvalue?)", e.last_residual());
    }
  } else {
    auto it = std::make_shared<IterativeSolvers>();
    it->aii_adj = aii_.adjoint();
    it->forward.setTolerance(1e-10);
    it->adjoint.setTolerance(1e-10);
    it->forward.compute(aii_);
    it->adjoint.compute(it->aii_adj);
    iter_ = it;
  }
}

CArray DirichletProblem::interior_solve(const CArray& rhs, bool adjoint, double* residual) const {
  const Eigen::VectorXcd b = to_vec(rhs);
  Eigen::VectorXcd x;
  if (lu_) {
    x = lu_->solve(b, adjoint);
  } else {
    x = adjoint ? Eigen::VectorXcd(iter_->adjoint.solve(b)) : Eigen::VectorXcd(iter_->forward.solve(b));
  }
  const double nb = b.norm();
  const double res = nb == 0.0 ? 0.0
                               : (adjoint ? (aii_.adjoint() * x - b).norm() : (aii_ * x - b).norm()) / nb;
  if (!(res <= 1e-8)) {
    std::ostringstream os;
    os << "dirichlet: discrete system near-singular (relative residual " << res << ")";
    throw SolverError(os.str(), res);
  }
  if (residual) *residual = res;
  return to_array(x);
}

CArray DirichletProblem::solve_interior(const CArray& f, double* residual) const {
  if (f.size() != boundary_size()) throw InputError("dirichlet: boundary data has wrong length");
  const Eigen::VectorXcd rhs = -(aib_ * to_vec(f));
  return interior_solve(to_array(rhs), false, residual);
}

DirichletSolution DirichletProblem::solve(const CArray& f) const {
  DirichletSolution s{Field(dom_.grid, m_, 1), 0.0};
  CArray ui = solve_interior(f, &s.residual);
  for (size_t i = 0; i < dom_.interior_count(); ++i)
    for (int r = 0; r < m_; ++r) s.u.at(dom_.interior[i], r) = ui[i * m_ + r];
  for (size_t b = 0; b < dom_.boundary_count(); ++b)
    for (int r = 0; r < m_; ++r) s.u.at(dom_.boundary[b], r) = f[b * m_ + r];
  return s;
}

CArray DirichletProblem::dtn(const CArray& f) const {
  CArray ui = solve_interior(f);
  const Eigen::VectorXcd y = db_ * to_vec(f) + di_ * to_vec(ui);
  return to_array(y);
}

CArray DirichletProblem::dtn_adjoint(const CArray& y) const {
  if (y.size() != boundary_size()) throw InputError("dirichlet: boundary data has wrong length");
  const Eigen::VectorXcd yv = to_vec(y);
  const Eigen::VectorXcd t = di_.adjoint() * yv;
  CArray w = interior_solve(to_array(t), true, nullptr);
  const Eigen::VectorXcd out = db_.adjoint() * yv - aib_.adjoint() * to_vec(w);
  return to_array(out);
}

LinearMap DirichletProblem::dtn_map() const {
  return {boundary_size(), [this](const CArray& f) { return dtn(f); },
          [this](const CArray& y) { return dtn_adjoint(y); }};
}

DirichletSolution solve_dirichlet(const Potential& pot, const BoxDomain& dom, const CArray& f) {
  return DirichletProblem(pot, dom).solve(f);
}

DtnMatrix assemble_dtn(const Potential& pot, const BoxDomain& dom, int jobs) {
  DirichletProblem prob(pot, dom);
  const size_t nb = prob.boundary_size();
  DtnMatrix d;
  d.m = pot.m;
  d.boundary_nodes = dom.boundary_count();
  d.matrix.resize(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
  jobs = std::max(1, jobs);
  auto work = [&](size_t start) {
    CArray e(nb, 0.0);
    for (size_t j = start; j < nb; j += static_cast<size_t>(jobs)) {
      e[j] = 1.0;
      CArray col = prob.dtn(e);
      e[j] = 0.0;
      d.matrix.col(static_cast<Eigen::Index>(j)) = to_vec(col);
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work, static_cast<size_t>(t));
    for (auto& t : pool) t.join();
  }
  if (!d.matrix.allFinite()) throw SolverError("dtn: non-finite entries", INFINITY);
  return d;
}

LinearMap as_map(const DtnMatrix& d) {
  const Eigen::MatrixXcd* m = &d.matrix;
  return {static_cast<size_t>(m->rows()), [m](const CArray& f) { return to_array(*m * to_vec(f)); },
          [m](const CArray& y) { return to_array(m->adjoint() * to_vec(y)); }};
}

NormEstimate spectral_norm(const LinearMap& a, int max_iter, double tol) {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd x(static_cast<Eigen::Index>(a.size));
  for (auto& v : x) v = cplx(nd(rng), nd(rng));
  x.normalize();
  NormEstimate est;
  double prev = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXcd y = to_vec(a.apply(to_array(x)));
    est.value = y.norm();
    est.iterations = it;
    if (est.value == 0.0) break;
    if (prev > 0.0 && std::abs(est.value - prev) <= tol * est.value) break;
    prev = est.value;
    x = to_vec(a.apply_adjoint(to_array(y)));
    const double nx = x.norm();
    if (nx == 0.0) break;
    x /= nx;
  }
  return est;
}

DistanceEstimate dtn_distance_estimate(const LinearMap& a, const LinearMap& b) {
  if (a.size != b.size) throw InputError("dtn_distance: dimension mismatch");
  auto sub = [](CArray u, const CArray& v) {
    for (size_t i = 0; i < u.size(); ++i) u[i] -= v[i];
    return u;
  };
  LinearMap diff{a.size, [&](const CArray& f) { return sub(a.apply(f), b.apply(f)); },
                 [&](const CArray& y) { return sub(a.apply_adjoint(y), b.apply_adjoint(y)); }};
  DistanceEstimate d;
  d.norm_a = spectral_norm(a, 100, 1e-5).value;
  d.norm_b = spectral_norm(b, 100, 1e-5).value;
  const double scale = std::max(d.norm_a, d.norm_b);
  if (scale == 0.0) return d;
  d.absolute = spectral_norm(diff, 100, 1e-5).value;
  d.relative = d.absolute / scale;
  return d;
}

double dtn_distance(const LinearMap& a, const LinearMap& b) { return dtn_distance_estimate(a, b).relative; }

double dtn_distance(const DtnMatrix& a, const DtnMatrix& b) {
  if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols())
    throw InputError("dtn_distance: dimension mismatch");
  return dtn_distance(as_map(a), as_map(b));
}

GaugeTransform phase_gauge(const Field& phi, const Eigen::MatrixXcd& H, bool boundary_identity) {
  const int m = static_cast<int>(H.rows());
  if (H.cols() != m || (H - H.adjoint()).norm() > 1e-12 * std::max(1.0, H.norm()))
    throw InputError("phase_gauge: H must be square Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  const Eigen::MatrixXcd U = es.eigenvectors();
  const Eigen::VectorXd d = es.eigenvalues();
  GaugeTransform gt{Field(phi.grid(), m, m), boundary_identity};
  for (size_t i = 0; i < phi.nodes(); ++i) {
    const double p = phi.at(i).real();
    Eigen::VectorXcd e(m);
    for (int k = 0; k < m; ++k) e[k] = std::exp(cplx(0, p * d[k]));
    const Eigen::MatrixXcd g = U * e.asDiagonal() * U.adjoint();
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) gt.g.at(i, r, c) = g(r, c);
  }
  return gt;
}

Potential gauge_transform(const Potential& pot, const GaugeTransform& gt) {
  pot.validate();
  const Field& g = gt.g;
  if (g.grid() != pot.grid() || g.rows() != pot.m || g.cols() != pot.m)
    throw InputError("gauge_transform: gauge shape differs from potential");
  if (min_abs_det(g) < 1e-12) throw InputError("gauge_transform: g is not invertible");
  const Field gi = inverse(g);
  Potential out;
  out.m = pot.m;
  const int n = pot.grid().n;
  for (int k = 0; k < n; ++k) {
    Field a = matmul(gi, matmul(pot.A[k], g));
    a -= cplx(0, 1) * matmul(gi, partial(g, k));
    out.A.push_back(a);
  }
  const Field v2 = matmul(gi, matmul(v_from_b(pot), g));
  out.B = b_from_v(out.A, v2);
  return out;
}

double collar_defect(const GaugeTransform& gt, const BoxDomain& dom, int collar) {
  const int m = gt.g.rows();
  double worst = 0.0;
  for (size_t node = 0; node < dom.grid.size(); ++node) {
    auto idx = dom.grid.index(node);
    bool in_box = true, near = false;
    for (int a = 0; a < dom.dim(); ++a) {
      const int li = idx[a] - dom.origin[a];
      in_box = in_box && li >= 0 && li <= dom.cells[a];
      near = near || li <= collar || li >= dom.cells[a] - collar;
    }
    if (!in_box || !near) continue;
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        worst = std::max(worst, std::abs(gt.g.at(node, r, c) - (r == c ? 1.0 : 0.0)));
  }
  return worst;
}

GaugeExperiment gauge_invariance_experiment(const std::function<Potential(const Grid&)>& potential,
                                            const std::function<GaugeTransform(const Grid&)>& gauge,
                                            const GaugeExperimentConfig& cfg) {
  GaugeExperiment ex;
  ex.note = "box domain: edges and corners are non-smooth; face nodes only carry the DtN";
  const double len = cfg.box.hi[0] - cfg.box.lo[0];
  for (int cells : cfg.cells) {
    const double pts = cells * cfg.period / len;
    const int N = static_cast<int>(std::lround(pts));
    if (std::abs(pts - N) > 1e-9) throw InputError("gauge experiment: box does not fit the periodic grid");
    const int factor = std::max(1, (cfg.fine_points + N - 1) / N);
    const Grid coarse(cfg.dim, N, cfg.period), fine(cfg.dim, N * factor, cfg.period);
    const Potential p1f = potential(fine);
    const GaugeTransform gf = gauge(fine);
    const Potential p2f = gauge_transform(p1f, gf);
    auto down = [&](const Potential& p) {
      Potential q;
      q.m = p.m;
      for (const auto& a : p.A) q.A.push_back(inject(a, coarse));
      q.B = inject(p.B, coarse);
      return q;
    };
    const BoxDomain dom = BoxDomain::make(coarse, cfg.box);
    const DirichletProblem d1(down(p1f), dom), d2(down(p2f), dom);
    GaugeLevel lv;
    lv.cells = cells;
    lv.h = dom.h;
    lv.collar_defect = collar_defect({inject(gf.g, coarse), gf.boundary_identity}, dom, cfg.collar);
    const DistanceEstimate de = dtn_distance_estimate(d1.dtn_map(), d2.dtn_map());
    lv.distance = de.relative;
    lv.absolute_distance = de.absolute;
    lv.norm1 = de.norm_a;
    ex.levels.push_back(lv);
  }
  auto ratio = [](double a, double b) { return b > 0 ? a / b : INFINITY; };
  for (size_t k = 0; k + 1 < ex.levels.size(); ++k) {
    ex.ratios.push_back(ratio(ex.levels[k].distance, ex.levels[k + 1].distance));
    ex.absolute_ratios.push_back(ratio(ex.levels[k].absolute_distance, ex.levels[k + 1].absolute_distance));
  }
  return ex;
}

}  // namespace cgoforge
