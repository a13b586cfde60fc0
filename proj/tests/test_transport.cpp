#include <cmath>
#include <numbers>

#include "cgoforge/error.hpp"
#include "cgoforge/spectral.hpp"
#include "cgoforge/transport.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cgoforge;

namespace {

const double kPi = std::numbers::pi;

struct Setup {
  Grid g;
  CutoffPair cut;
  CVec theta;
  RVec center;
};

Setup setup(int N) {
  Setup s{Grid(3, N, 4.0), {}, CVec(3), RVec::Constant(3, 2.0)};
  s.cut = make_cutoffs(s.g, cube(3, 1.5, 2.5), {0.5, 0.7});
  s.theta << 1.0, cplx(0, 1), 0.0;
  return s;
}

}  // namespace

TEST_SUITE("transport") {
  TEST_CASE("A = 0 gives C = I with zero residual") {
    auto s = setup(16);
    auto pot = zero_potential(s.g, 2);
    auto sol = solve_transport(pot.A, s.theta, s.cut);
    CHECK(l2_norm(sol.C - identity_field(s.g, 2)) == 0.0);
    CHECK(sol.residual_norm == 0.0);
    CHECK(transport_residual(identity_field(s.g, 2), pot.A, s.theta, {}) == 0.0);
  }

  TEST_CASE("C = I with A != 0 gives ||theta.A|| over the mask") {
    auto s = setup(16);
    auto pot = gaussian_yang_mills(s.g, s.center, 0.35, 0.5, 0.0);
    Mask m = box_mask(s.g, s.cut.omega);
    const double r = transport_residual(identity_field(s.g, 2), pot.A, s.theta, m);
    CHECK(r == doctest::Approx(l2_norm(contract(s.theta, pot.A), m)).epsilon(1e-14));
  }

  TEST_CASE("sink antiderivative is exact on {psi = 1}") {
    auto s = setup(24);
    SinkAntiderivative K(s.cut, s.theta);
    Field f = oracle::gaussian(s.g, s.center, 0.4, 1.0);
    Field kf = K.apply(scale(s.cut.psi, f));
    Field back = directional_derivative(kf, s.theta);
    Mask one = mask_where_one(s.cut.psi);
    CHECK(l2_norm(back - f, one) < 1e-12 * l2_norm(f, one));
    CHECK(l2_norm(K.project(kf)) < 1e-13);
    CHECK(K.project(K.kappa()).at(0).real() == doctest::Approx(1.0));
    for (size_t i = 0; i < s.g.size(); ++i)
      if (one[i]) CHECK(K.kappa().at(i) == cplx(0.0));
  }

  TEST_CASE("commutative case matches the closed form") {
    auto s = setup(32);
    Field a1 = oracle::gaussian(s.g, s.center, 0.35, 1.0);
    Field a2 = scale(sample(s.g, [](const RVec& x) { return 0.5 * (x[0] - 2.0); }), a1);
    auto pot = scalar_potential({a1, a2, Field(s.g)}, 2);
    auto sol = solve_transport(pot.A, s.theta, s.cut);
    Field ref = oracle::commutative_transport({a1, a2, Field(s.g)}, s.theta, s.cut);
    Mask one = mask_where_one(s.cut.psi);
    Field c00 = sol.C.component(0, 0), c11 = sol.C.component(1, 1);
    CHECK(l2_norm(c00 - ref, one) / l2_norm(ref, one) < 1e-6);
    CHECK(l2_norm(c11 - ref, one) / l2_norm(ref, one) < 1e-6);
    CHECK(l2_norm(sol.C.component(0, 1)) < 1e-12);
  }

  TEST_CASE("non-commuting bump: certificate, determinant, FD re-check") {
    auto s = setup(24);
    auto pot = gaussian_yang_mills(s.g, s.center, 0.35, 0.6, 0.3);
    auto sol = solve_transport(pot.A, s.theta, s.cut);
    CHECK(sol.method == "picard");
    CHECK(sol.residual_rel <= 1e-8);
    CHECK(sol.min_abs_det > 0.1);
    Mask one = mask_where_one(s.cut.psi);
    const double fd = transport_residual_fd(sol.C, pot.A, s.theta, one);
    const double scaleTA = l2_norm(matmul(contract(s.theta, pot.A), sol.C), one);
    CHECK(fd / scaleTA < 5e-2);  // fourth-order FD truncation at h = 1/6
    // Finer grid shrinks the FD residual at about fourth order.
    auto s2 = setup(32);
    auto pot2 = gaussian_yang_mills(s2.g, s2.center, 0.35, 0.6, 0.3);
    auto sol2 = solve_transport(pot2.A, s2.theta, s2.cut);
    Mask one2 = mask_where_one(s2.cut.psi);
    const double fd2 = transport_residual_fd(sol2.C, pot2.A, s2.theta, one2) /
                       l2_norm(matmul(contract(s2.theta, pot2.A), sol2.C), one2);
    CHECK(fd / scaleTA / fd2 > 2.5);
  }

  TEST_CASE("phase invariance") {
    auto s = setup(16);
    auto pot = gaussian_yang_mills(s.g, s.center, 0.35, 0.6, 0.0);
    CHECK(phase_invariance_check(pot.A, s.theta, s.cut, {0.0}) == 0.0);
    CHECK(phase_invariance_check(pot.A, s.theta, s.cut, {kPi / 3, kPi / 2, kPi}) <= 1e-8);
    auto zero = zero_potential(s.g, 2);
    CHECK(phase_invariance_check(zero.A, s.theta, s.cut, {kPi / 3, kPi}) == 0.0);
  }

  TEST_CASE("GMRES fallback reproduces Picard and handles strong potentials") {
    auto s = setup(16);
    auto pot = gaussian_yang_mills(s.g, s.center, 0.35, 0.6, 0.0);
    auto p = solve_transport(pot.A, s.theta, s.cut);
    TransportOptions o;
    o.force_fallback = true;
    auto q = solve_transport(pot.A, s.theta, s.cut, o);
    CHECK(q.method == "gmres");
    CHECK(l2_norm(q.C - p.C) / l2_norm(p.C) < 1e-8);
    auto strong = gaussian_yang_mills(s.g, s.center, 0.35, 32.0, 0.0);
    TransportOptions np;
    np.allow_fallback = false;
    bool picard_failed = false;
    try {
      solve_transport(strong.A, s.theta, s.cut, np);
    } catch (const SolverError&) {
      picard_failed = true;
    }
    CHECK(picard_failed);
    auto f = solve_transport(strong.A, s.theta, s.cut);
    CHECK(f.method == "gmres");
    CHECK(f.residual_rel <= 1e-8);
  }

  TEST_CASE("theta outside a coordinate plane is rejected") {
    auto s = setup(16);
    CVec th(3);
    const double r = 1 / std::sqrt(2.0);
    th << r, cplx(0, 1), r;
    auto pot = zero_potential(s.g, 1);
    CHECK_THROWS_AS(solve_transport(pot.A, th, s.cut), InputError);
  }
}
