#include <cmath>
#include <numbers>

#include "cgoforge/elastic_h.hpp"
#include "cgoforge/error.hpp"
#include "cgoforge/spectral.hpp"
#include "doctest.h"

using namespace cgoforge;

namespace {

const double kPi = std::numbers::pi;
using J3 = std::array<Jet, 3>;

// Smooth period-4 parameters, analytic so spectral derivatives are accurate.
Jet mu_smooth(const J3& x) {
  return Jet(1.3) + Jet(0.3) * sin(Jet(kPi / 2) * x[0]) * cos(Jet(kPi / 2) * x[1]) +
         Jet(0.2) * cos(Jet(kPi / 2) * x[2]);
}
Jet lambda_smooth(const J3& x) { return Jet(1.0) + Jet(0.4) * sin(Jet(kPi / 2) * (x[0] + x[2])); }

// Unit box [0.5, 1.5]^3 on a period-2 grid, edges included.
BoxDomain unit_box(int cells) { return BoxDomain::make(Grid(3, 2 * cells, 2.0), cube(3, 0.5, 1.5), true); }

CVec value3(const std::array<Jet, 3>& u) {
  CVec v(3);
  for (int k = 0; k < 3; ++k) v[k] = u[k].v;
  return v;
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

// w = grad phi with phi harmonic: solves constant-parameter elasticity.
CVec grad_phi1(const RVec& x) {
  const double e = std::exp(x[2]), s = std::sin(0.6 * x[0]), c = std::cos(0.8 * x[1]);
  CVec v(3);
  v << 0.6 * e * std::cos(0.6 * x[0]) * c, -0.8 * e * s * std::sin(0.8 * x[1]), e * s * c;
  return v;
}
CVec grad_phi2(const RVec& x) {
  const cplx I(0, 1);
  CVec v(3);
  v << x[1] * x[2] + 2 * x[0] + I * std::exp(x[0]) * std::cos(x[1]),
      x[0] * x[2] - 2 * x[1] - I * std::exp(x[0]) * std::sin(x[1]), x[0] * x[1];
  return v;
}

LamePair bump_pair(const Grid& g, const RVec& c, double radius, double el, double em) {
  return make_lame(g, [&](const RVec& x) { return 1.0 + el * smooth_bump(x, c, radius); },
                   [&](const RVec& x) { return 1.0 + em * smooth_bump(x, c, radius); });
}

}  // namespace

TEST_SUITE("elasticity") {
  TEST_CASE("Lame pairs are validated") {
    Grid g(3, 8, 4.0);
    CHECK_NOTHROW(constant_lame(g, 1.0, 1.0));
    CHECK_NOTHROW(constant_lame(g, -0.5, 1.0));
    CHECK_THROWS_AS(constant_lame(g, 1.0, 0.0), InputError);
    CHECK_THROWS_AS(constant_lame(g, -0.7, 1.0), InputError);  // 3 lambda + 2 mu < 0
    const LamePair p = constant_lame(g, 1.0, 1.0);
    CHECK(b_field(p).at(0).real() == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("V1: constant mu, substitution and symbolic oracle") {
    Grid g(3, 8, 4.0);
    const Field v = build_v1(constant_lame(g, 1.0, 1.0));
    double top = 0;
    for (size_t q = 0; q < g.size(); ++q)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) top = std::max(top, std::abs(v.at(q, i, j)));
    CHECK(top < 1e-14);
    CHECK(std::abs(v.at(5, 3, 3) - 2.0 / 3.0) < 1e-15);

    Grid h(3, 32, 4.0);
    const LamePair p = make_lame(h, lambda_smooth, mu_smooth);
    const Field w = build_v1(p);
    double err = 0, scale = 0;
    for (size_t q = 0; q < h.size(); q += 7) {
      const RVec x = h.point(q);
      const auto X = jet_point(x[0], x[1], x[2]);
      const Jet mu = mu_smooth(X), lam = lambda_smooth(X), im = inv(mu);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const double ref = -2.0 * std::sqrt(mu.v) * im.dd(i, j);
          err = std::max(err, std::abs(w.at(q, i, j) - ref));
          scale = std::max(scale, std::abs(ref));
        }
        err = std::max(err, std::abs(w.at(q, i, 3) + mu.d(i) / mu.v));
        CHECK(std::abs(w.at(q, 3, i)) == 0.0);
      }
      err = std::max(err, std::abs(w.at(q, 3, 3) - (lam.v + mu.v) * std::sqrt(mu.v) / (lam.v + 2 * mu.v)));
    }
    CHECK(scale > 0.1);
    CHECK(err < 1e-9);
  }

  TEST_CASE("elastic transport: closed form for constant mu") {
    Grid g(3, 16, 4.0);
    const auto cut = make_cutoffs(g, cube(3, 1.0, 3.0), {0.25, 0.5});
    const CVec theta = frame_for_l(RVec::Unit(3, 2), 8.0).theta;
    const Mask m = mask_where_one(cut.psi);
    const LamePair p = constant_lame(g, 1.0, 2.0);
    const TransportSolution t = elastic_transport(p, theta, cut);
    CHECK(t.residual_rel < 1e-8);
    const Field c = c00_explicit(p, theta, cut);
    CHECK(l2_norm(c - t.C, m) / l2_norm(t.C, m) < 1e-10);
    // The literal b/mu variant differs from the beta/2 one by mu^{1/2}: equal only when mu = 1.
    const Field lit = c00_explicit(p, theta, cut, C00Variant::Literal);
    CHECK(l2_norm(lit - t.C, m) / l2_norm(t.C, m) > 1e-2);
    const LamePair q = constant_lame(g, 1.0, 1.0);
    const Field a = c00_explicit(q, theta, cut), b = c00_explicit(q, theta, cut, C00Variant::Literal);
    CHECK(l2_norm(a - b) < 1e-13);
  }

  TEST_CASE("solver: affine data give affine solutions, rigid motions have zero traction") {
    const BoxDomain dom = unit_box(6);
    const LamePair p = constant_lame(dom.grid, 1.5, 0.8);
    Eigen::Matrix3d M;
    M << 0.3, -0.2, 0.5, 0.1, 0.4, -0.3, 0.7, 0.2, -0.1;
    const RVec b = RVec::Constant(3, 0.25);
    auto affine = [&](const RVec& x) { return CVec((M * x + b).cast<cplx>()); };
    const ElasticSolution s = solve_elastic(p, dom, boundary_samples(dom, 3, affine));
    double err = 0;
    for (size_t i = 0; i < dom.interior_count(); ++i) {
      const CVec ref = affine(dom.grid.point(dom.interior[i]));
      for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(s.w.at(dom.interior[i], k) - ref[k]));
    }
    CHECK(err < 1e-11);

    const Eigen::Vector3d omega(0.3, -0.5, 0.2), trans(1.0, -2.0, 0.5);
    auto rigid = [&](const RVec& x) {
      const Eigen::Vector3d y = x;
      return CVec((trans + omega.cross(y)).cast<cplx>());
    };
    const ElasticBoundaryMap map = elastic_dtn(p, dom);
    CHECK(map.matrix.rows() == static_cast<Eigen::Index>(3 * dom.face_count()));
    CHECK(map.matrix.cols() == static_cast<Eigen::Index>(3 * dom.boundary_count()));
    CHECK(map.matrix.allFinite());
    const CArray h = boundary_samples(dom, 3, rigid);
    const Eigen::VectorXcd t = map.matrix * Eigen::Map<const Eigen::VectorXcd>(h.data(), h.size());
    CHECK(t.cwiseAbs().maxCoeff() < 1e-10 * map.matrix.cwiseAbs().maxCoeff());
  }

  TEST_CASE("solver: manufactured variable-coefficient solution converges at second order") {
    JetScalar lam = [](const J3& x) { return Jet(2.0) + Jet(0.5) * cos(x[2] + x[0]); };
    JetScalar mu = [](const J3& x) { return Jet(1.0) + Jet(0.3) * sin(x[0]) * cos(x[1]); };
    JetVector w = [](const J3& x) {
      return std::array<Jet, 3>{sin(x[0] + x[1] * Jet(0.5)), exp(Jet(0.3) * x[2]) * cos(x[0]),
                                x[0] * x[1] * x[2] * x[2] * Jet(0.2)};
    };
    std::vector<double> errs;
    for (int cells : {6, 12}) {
      const BoxDomain dom = unit_box(cells);
      const LamePair p = make_lame(dom.grid, lam, mu);
      const Field F = navier_forcing(dom.grid, lam, mu, w);
      auto exact = [&](const RVec& x) { return value3(w(jet_point(x[0], x[1], x[2]))); };
      const ElasticSolution s = solve_elastic(p, dom, boundary_samples(dom, 3, exact), &F);
      double e = 0;
      for (size_t i = 0; i < dom.interior_count(); ++i) {
        const CVec ref = exact(dom.grid.point(dom.interior[i]));
        for (int k = 0; k < 3; ++k) e = std::max(e, std::abs(s.w.at(dom.interior[i], k) - ref[k]));
      }
      errs.push_back(e);
    }
    CHECK(order(errs[0], errs[1]) == doctest::Approx(2.0).epsilon(0.15));
  }

  TEST_CASE("traction of a smooth solution converges at second order") {
    const double lam = 1.5, mu = 0.8;
    std::vector<double> errs;
    for (int cells : {6, 12}) {
      const BoxDomain dom = unit_box(cells);
      const ElasticProblem prob(constant_lame(dom.grid, lam, mu), dom);
      const CArray t = prob.traction(boundary_samples(dom, 3, grad_phi1));
      double e = 0;
      for (size_t b = 0; b < dom.face_count(); ++b) {
        const RVec x = dom.grid.point(dom.boundary[b]), n = dom.normal(b);
        // Hessian of phi1 by central differences of the analytic gradient (step 1e-5).
        Eigen::Matrix3d H;
        for (int j = 0; j < 3; ++j) {
          RVec xp = x, xm = x;
          xp[j] += 1e-5;
          xm[j] -= 1e-5;
          const CVec d = (grad_phi1(xp) - grad_phi1(xm)) / 2e-5;
          for (int k = 0; k < 3; ++k) H(j, k) = d[k].real();
        }
        for (int k = 0; k < 3; ++k) {
          double ref = lam * H.trace() * n[k];
          for (int j = 0; j < 3; ++j) ref += mu * (H(j, k) + H(k, j)) * n[j];
          e = std::max(e, std::abs(t[b * 3 + k] - ref));
        }
      }
      errs.push_back(e);
    }
    CHECK(order(errs[0], errs[1]) > 1.7);
  }

  TEST_CASE("Betti reciprocity of the constant-parameter map") {
    for (int cells : {6, 12}) {
      const BoxDomain dom = unit_box(cells);
      const ElasticProblem prob(constant_lame(dom.grid, 1.0, 1.0), dom);
      const CArray h1 = boundary_samples(dom, 3, grad_phi1), h2 = boundary_samples(dom, 3, grad_phi2);
      const cplx a = boundary_pairing(dom, prob.traction(h1), h2);
      const cplx b = std::conj(boundary_pairing(dom, prob.traction(h2), h1));
      CHECK(std::abs(a - b) / std::abs(a) < dom.h * dom.h);
    }
  }

  TEST_CASE("AITY reduction: trivial cases and constant-mu refinement study") {
    Grid g(3, 16, 4.0);
    const Field u = sample(g, [](const RVec& x) { return cplx(std::sin(kPi * x[0] / 2)); });
    Field U(g, 3, 1);
    for (int k = 0; k < 3; ++k) U.set_component(k, 0, u);
    const Field f = sample(g, [](const RVec& x) { return cplx(std::cos(kPi * x[1] / 2)); });
    const Field one(g, 1, 1, 1.0), four(g, 1, 1, 4.0), zero(g);
    const Field w1 = aity_reduce(U, f, one);
    const auto gf = gradient(f);
    double e1 = 0, e2 = 0;
    const Field w2 = aity_reduce(U, zero, four);
    for (size_t q = 0; q < g.size(); ++q)
      for (int k = 0; k < 3; ++k) {
        e1 = std::max(e1, std::abs(w1.at(q, k) - U.at(q, k) - gf[k].at(q)));
        e2 = std::max(e2, std::abs(w2.at(q, k) - 0.5 * U.at(q, k)));
      }
    CHECK(e1 < 1e-12);
    CHECK(e2 < 1e-15);

    // (u, f) with u harmonic and Delta f = -beta div u solves the reduced system for constant mu.
    const double lam = 1.5, mu = 2.0, beta = (lam + mu) * std::sqrt(mu) / (lam + 2 * mu);
    auto uf = [&](const RVec& x) {
      CVec v(4);
      v << std::exp(x[0]) * std::cos(x[1]), std::exp(x[1]) * std::cos(x[2]), std::exp(x[2]) * std::cos(x[0]),
          -0.5 * beta *
              (x[0] * std::exp(x[0]) * std::cos(x[1]) + x[1] * std::exp(x[1]) * std::cos(x[2]) +
               x[2] * std::exp(x[2]) * std::cos(x[0]));
      return v;
    };
    std::vector<double> res;
    for (int cells : {12, 24, 48}) {
      const BoxDomain dom = unit_box(cells);
      Field uu(dom.grid, 3, 1), ff(dom.grid);
      for (size_t q = 0; q < dom.grid.size(); ++q) {
        const CVec val = uf(dom.grid.point(q));
        for (int k = 0; k < 3; ++k) uu.at(q, k) = val[k];
        ff.at(q) = val[3];
      }
      const LamePair p = constant_lame(dom.grid, lam, mu);
      const Field w = aity_reduce_fd(uu, ff, p.mu, dom);
      const Field r = navier_apply_fd(p, dom, w);
      // Nodes two or more cells inside: their stencils see only centered gradients.
      double m = 0;
      for (size_t i = 0; i < dom.interior_count(); ++i) {
        const auto li = dom.interior_local[i];
        bool deep = true;
        for (int a = 0; a < 3; ++a) deep = deep && li[a] >= 2 && li[a] <= dom.cells[a] - 2;
        if (!deep) continue;
        for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(r.at(dom.interior[i], k)));
      }
      res.push_back(m);
    }
    CHECK(order(res[0], res[1]) == doctest::Approx(2.0).epsilon(0.25));
    CHECK(order(res[1], res[2]) == doctest::Approx(2.0).epsilon(0.25));
  }

  TEST_CASE("H: equal pairs vanish, swap symmetry, Green cross-check") {
    Grid g(3, 16, 4.0);
    const LamePair a = make_lame(g, lambda_smooth, mu_smooth);
    const LamePair b = bump_pair(g, RVec::Constant(3, 2.0), 0.8, 0.1, 0.2);
    auto vec = [&](double s) {
      Field w(g, 3, 1);
      for (int k = 0; k < 3; ++k)
        w.set_component(k, 0, sample(g, [&](const RVec& x) {
                          return std::exp(cplx(0, s * (k + 1))) * std::sin(kPi * (x[k] + s) / 2) *
                                 std::cos(kPi * x[(k + 1) % 3] / 2);
                        }));
      return w;
    };
    const Field w1 = vec(0.3), w2 = vec(1.1);
    const Box om = cube(3, 1.0, 3.0);
    CHECK(h_functional(a, a, w1, w2, om) == cplx(0.0));
    // Swapping the solutions and negating the parameter differences conjugates H.
    const cplx h12 = h_functional(a, b, w1, w2, om), h21 = h_functional(b, a, w2, w1, om);
    CHECK(std::abs(h12 + std::conj(h21)) < 1e-13 * std::abs(h12));

    // Parameters equal near the boundary; data are traces of smooth constant-parameter solutions.
    std::vector<GreenCheck> levels;
    for (int cells : {6, 12}) {
      const BoxDomain dom = unit_box(cells);
      const LamePair p1 = constant_lame(dom.grid, 1.0, 1.0);
      const LamePair p2 = bump_pair(dom.grid, RVec::Constant(3, 1.0), 0.45, 0.3, 0.2);
      levels.push_back(h_green_check(p1, p2, dom, boundary_samples(dom, 3, grad_phi1),
                                     boundary_samples(dom, 3, grad_phi2)));
      CHECK(h_green_check(p1, p1, dom, boundary_samples(dom, 3, grad_phi1), boundary_samples(dom, 3, grad_phi2))
                .volume == cplx(0.0));
    }
    const double measured = std::max(std::abs(levels[1].volume - levels[0].volume),
                                     std::abs(levels[1].boundary - levels[0].boundary));
    CHECK(levels[1].difference <= 5.0 * measured);
    CHECK(levels[1].difference < levels[0].difference);
  }

  TEST_CASE("elastic CGO: constant column, residual slopes, reduced residual") {
    Grid g(3, 16, 4.0);
    const auto cut = make_cutoffs(g, cube(3, 1.0, 3.0), {0.25, 0.5});
    const Mask m = mask_where_one(cut.psi);
    CVec p4 = CVec::Zero(4);
    p4[3] = 1.0;
    const ElasticCgo c = cgo_elastic_solution(constant_lame(g, 1.0, 2.0), frame_for_l(RVec::Zero(3), 10.0), p4, 2, cut);
    Field v = c.expansion.terms[0];
    for (size_t k = 1; k < c.expansion.terms.size(); ++k) v += c.expansion.terms[k];
    Field e4(g, 4, 1);
    for (size_t q = 0; q < g.size(); ++q) e4.at(q, 3) = 1.0;
    CHECK(max_abs(v - e4, m) <= 1e-8);
    CHECK(c.system_residual < 1e-8);

    Grid h(3, 24, 4.0);
    const auto cut2 = make_cutoffs(h, cube(3, 1.0, 3.0), {0.25, 0.5});
    const LamePair p = bump_pair(h, RVec::Constant(3, 2.0), 0.8, 0.1, 0.2);
    CVec p1 = CVec::Zero(4);
    p1[0] = 1.0;
    const RVec l = RVec::Unit(3, 2);
    const TransportSolution t = elastic_transport(p, frame_for_l(l, 8.0).theta, cut2);
    const std::vector<double> taus{8, 16, 32, 64};
    for (int n : {1, 2}) {
      std::vector<double> sys, red;
      for (double tau : taus) {
        const ElasticCgo e = cgo_elastic_solution(p, frame_for_l(l, tau), p1, n, cut2, {}, &t);
        sys.push_back(e.system_residual);
        red.push_back(e.reduced_residual);
      }
      CHECK(fit_decay_order(taus, sys).slope == doctest::Approx(-n).epsilon(0.5 / n));
      CHECK(red.back() < red.front());
    }
  }

  TEST_CASE("V(x, theta) and the direct H2 integral") {
    Grid g(3, 32, 4.0);
    const LamePair a = make_lame(g, lambda_smooth, mu_smooth);
    const CVec theta = frame_for_l(RVec::Unit(3, 2), 8.0).theta;
    const VMatrix z = v_matrix(a, a, theta);
    CHECK(max_abs(z.V) < 1e-15);

    JetScalar lam2 = [](const J3& x) { return Jet(1.2) + Jet(0.2) * cos(Jet(kPi / 2) * x[1]); };
    JetScalar mu2 = [](const J3& x) { return Jet(0.9) + Jet(0.25) * sin(Jet(kPi / 2) * (x[2] - x[0])); };
    const LamePair b = make_lame(g, lam2, mu2);
    const VMatrix vm = v_matrix(a, b, theta);
    auto dtheta2 = [&](const Jet& f) {
      cplx s = 0;
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) s += theta[j] * theta[k] * f.dd(j, k);
      return s;
    };
    auto dtheta = [&](const Jet& f) {
      cplx s = 0;
      for (int j = 0; j < 3; ++j) s += theta[j] * f.d(j);
      return s;
    };
    double err = 0;
    for (size_t q = 0; q < g.size(); q += 11) {
      const RVec x = g.point(q);
      const auto X = jet_point(x[0], x[1], x[2]);
      const Jet l1 = lambda_smooth(X), u1 = mu_smooth(X), l2 = lam2(X), u2 = mu2(X);
      const Jet b1 = u1 * (l1 + u1) / ((l1 + Jet(2.0) * u1) * Jet(2.0)), b2 = u2 * (l2 + u2) / ((l2 + Jet(2.0) * u2) * Jet(2.0));
      const double dm = 1.0 / u2.v - 1.0 / u1.v;
      const cplx a1 = dtheta2(inv(u1)), a2 = dtheta2(inv(u2));
      const cplx ref[4] = {(l1.v + u1.v - l2.v - u2.v) * std::sqrt(u1.v * u2.v) / ((l1.v + 2 * u1.v) * (l2.v + 2 * u2.v)),
                           2 * dm / std::sqrt(u2.v) * dtheta(b2), 2 * dm / std::sqrt(u1.v) * dtheta(b1),
                           2 * dm * (b1.v * a1 + b2.v * a2)};
      for (int r = 0; r < 4; ++r) err = std::max(err, std::abs(vm.V.at(q, r / 2, r % 2) - ref[r]));
      err = std::max(err, std::abs(vm.a1.at(q) - a1));
    }
    CHECK(err < 1e-8);

    // Equal pairs give zero; the integral carries no tau.
    Grid h(3, 16, 4.0);
    const auto cut = make_cutoffs(h, cube(3, 1.0, 3.0), {0.25, 0.5});
    const LamePair p1 = constant_lame(h, 1.0, 1.0), p2 = bump_pair(h, RVec::Constant(3, 2.0), 0.8, 0.1, 0.2);
    const Frame f8 = frame_for_l(RVec::Unit(3, 2), 8.0), f40 = frame_for_l(RVec::Unit(3, 2), 40.0);
    const Field C1 = elastic_transport(p1, f8.theta, cut).C, C2 = elastic_transport(p2, conjugate_frame(f8).theta, cut).C;
    CVec p = CVec::Zero(4);
    p[0] = 1.0;
    CHECK(std::abs(h2_direct(p1, p1, f8, C1, C1, p, cut.omega).value) == 0.0);
    const H2Direct d8 = h2_direct(p1, p2, f8, C1, C2, p, cut.omega), d40 = h2_direct(p1, p2, f40, C1, C2, p, cut.omega);
    CHECK(std::abs(d8.value) > 1e-4);
    CHECK(std::abs(d8.value - d40.value) <= 1e-12 * std::abs(d8.value));
    CHECK(d8.value == -d8.displayed);
  }

  TEST_CASE("H series: synthetic fit, equal pairs, fitted H2 matches the direct integral") {
    std::vector<double> taus{8, 12, 16, 24, 32};
    std::vector<cplx> vals;
    for (double t : taus) vals.push_back(3.0 * t * t + 2.0 * t + 1.0);
    const HSeries s = fit_h_series(taus, vals, 3);
    CHECK(std::abs(s.h2 - 3.0) < 1e-9);
    CHECK(std::abs(s.h1 - 2.0) < 1e-9);
    CHECK(std::abs(s.h0 - 1.0) < 1e-9);
    CHECK_THROWS_AS(fit_h_series({8, 16, 32, 64}, {1, 2, 3, 4}, 3), InputError);

    Grid g(3, 24, 4.0);
    const LamePair p1 = constant_lame(g, 1.0, 1.0), p2 = bump_pair(g, RVec::Constant(3, 2.0), 0.8, 0.1, 0.2);
    HSeriesConfig cfg;
    cfg.l = RVec::Unit(3, 2);
    cfg.taus = {8, 12, 16, 24, 32, 48, 64};
    cfg.p = CVec::Zero(4);
    cfg.p[0] = 1.0;
    cfg.omega = cube(3, 1.0, 3.0);
    const HSeriesResult same = h_series_fit(p2, p2, cfg);
    for (auto v : same.series.values) CHECK(v == cplx(0.0));
    const HSeriesResult r = h_series_fit(p1, p2, cfg);
    CHECK(!r.series.flagged);
    CHECK(std::abs(r.series.h2 - r.direct.value) <= 0.05 * std::abs(r.direct.value));
  }

  TEST_CASE("H0 for constant pairs is quartic in |l|") {
    Grid g(3, 16, 4.0);
    HSeriesConfig cfg;
    cfg.taus = {8, 12, 16, 24, 32};
    cfg.omega = cube(3, 1.0, 3.0);
    CHECK(std::abs(box_fourier_integral(cube(3, 0.0, 1.0), RVec::Unit(3, 0) * 2.0 * kPi)) < 1e-15);
    const QuarticStudy q = h0_quartic_study(g, 1.0, 1.0, 1.3, 1.2, RVec::Unit(3, 2), {0.5, 1.0, 1.5}, cfg);
    CHECK(q.c_expected == doctest::Approx(0.2 / 2.4));
    CHECK(q.relative_error < 0.15);
  }
}
