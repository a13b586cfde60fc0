#include <cmath>
#include <numbers>

#include "cgoforge/error.hpp"
#include "cgoforge/identity.hpp"
#include "doctest.h"

using namespace cgoforge;

namespace {

const double kPi = std::numbers::pi;
using J3 = std::array<Jet, 3>;
const Jet kq(kPi / 2);

Jet mu_a(const J3& x) { return Jet(1.3) + Jet(0.3) * sin(kq * x[0]) * cos(kq * x[1]) + Jet(0.2) * cos(kq * x[2]); }
Jet lambda_a(const J3& x) { return Jet(1.0) + Jet(0.4) * sin(kq * (x[0] + x[2])); }
Jet mu_b(const J3& x) { return Jet(0.9) + Jet(0.25) * sin(kq * (x[2] - x[0])); }
Jet lambda_b(const J3& x) { return Jet(1.2) + Jet(0.2) * cos(kq * x[1]) * sin(kq * x[2]); }

// theta^t M theta with M = sqrt(b) Hess(b^{-1/2}) - b Hess(1/mu), from jets.
Eigen::Matrix3cd side_matrix(JetFn lam, JetFn mu, const RVec& x) {
  const auto X = jet_point(x[0], x[1], x[2]);
  const Jet l = lam(X), m = mu(X);
  const Jet b = m * (l + m) / (Jet(2.0) * (l + Jet(2.0) * m));
  const Jet s = pow(b, -0.5), im = inv(m);
  Eigen::Matrix3cd M;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) M(j, k) = std::sqrt(b.v) * s.dd(j, k) - b.v * im.dd(j, k);
  return M;
}
Jet one(const J3&) { return Jet(1.0); }

cplx quad(const Eigen::Matrix3cd& M, const CVec& t) { return t.transpose() * M * t; }

// Norm weighted by exp(alpha r^2) of a radial profile about the box center, by Simpson in r.
double radial_norm(const std::function<double(double)>& f, double alpha, double rmax) {
  const int n = 20000;
  const double h = rmax / n;
  double s = 0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * h, w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    s += w * f(r) * f(r) * std::exp(2 * alpha * r * r) * r * r;
  }
  return std::sqrt(4 * kPi * s * h / 3);
}

double bump(double r, double R) { return r < R ? std::exp(1 - 1 / (1 - r * r / (R * R))) : 0.0; }

}  // namespace

TEST_SUITE("identity") {
  TEST_CASE("gap vanishes for equal pairs and is antisymmetric") {
    Grid g(3, 24, 4.0);
    const LamePair a = make_lame(g, lambda_a, mu_a), b = make_lame(g, lambda_b, mu_b);
    for (const CVec& t : default_theta_samples()) {
      CHECK(max_abs(er2_identity_gap(a, a, t)) <= 1e-10);
      const Field ab = er2_identity_gap(a, b, t), ba = er2_identity_gap(b, a, t);
      CHECK(max_abs(ab + ba) <= 1e-12 * max_abs(ab));
    }
    CHECK_THROWS_AS(er2_identity_gap(a, make_lame(Grid(3, 16, 4.0), lambda_a, mu_a), default_theta_samples()[0]),
                    InputError);
  }

  TEST_CASE("gap agrees with the symbolic oracle") {
    Grid g(3, 32, 4.0);
    const LamePair a = make_lame(g, lambda_a, mu_a), b = make_lame(g, lambda_b, mu_b);
    const LamePair c = constant_lame(g, 1.0, 1.0);
    CVec t(3);
    t << cplx(0.6, 0.0), cplx(0.0, 1.0), cplx(0.8, 0.0);  // null: 0.36 - 1 + 0.64 = 0
    const Field gab = er2_identity_gap(a, b, t), gcb = er2_identity_gap(c, b, t);
    double err = 0, err_c = 0, scale = 0;
    for (size_t q = 0; q < g.size(); q += 5) {
      const RVec x = g.point(q);
      const cplx ref = quad(side_matrix(lambda_a, mu_a, x) - side_matrix(lambda_b, mu_b, x), t);
      // A constant pair contributes nothing: the gap is minus the other side.
      const cplx ref_c = -quad(side_matrix(lambda_b, mu_b, x), t);
      err = std::max(err, std::abs(gab.at(q) - ref));
      err_c = std::max(err_c, std::abs(gcb.at(q) - ref_c));
      scale = std::max(scale, std::abs(ref));
    }
    CHECK(scale > 1e-2);
    CHECK(err <= 1e-6);
    CHECK(err_c <= 1e-6);
    CHECK(std::abs(quad(side_matrix(one, one, RVec::Zero(3)), t)) == 0.0);
  }

  TEST_CASE("five traceless components from null theta samples") {
    Grid g(3, 32, 4.0);
    const LamePair a = make_lame(g, lambda_a, mu_a), b = make_lame(g, lambda_b, mu_b);
    const ThetaComponents z = identity_theta_components(a, a, default_theta_samples());
    for (const Field& f : z.components) CHECK(max_abs(f) <= 1e-10);

    const ThetaComponents tc = identity_theta_components(a, b, default_theta_samples());
    CHECK(tc.components.size() == 5);
    CHECK(tc.reconstruction_error <= 1e-8);
    CHECK(tc.condition < 10.0);
    double err = 0;
    for (size_t q = 0; q < g.size(); q += 7) {
      const RVec x = g.point(q);
      const auto ref = traceless_components(side_matrix(lambda_a, mu_a, x) - side_matrix(lambda_b, mu_b, x));
      for (int k = 0; k < 5; ++k) err = std::max(err, std::abs(tc.components[k].at(q) - ref[k]));
    }
    CHECK(err <= 1e-6);

    // A general null theta is reproduced from the components.
    CVec t(3);
    t << cplx(0.0, 1.0), cplx(0.6, 0.0), cplx(0.8, 0.0);
    const Field gap = er2_identity_gap(a, b, t);
    const auto row = theta_monomials(t);
    double rec = 0;
    for (size_t q = 0; q < g.size(); ++q) {
      cplx v = 0;
      for (int k = 0; k < 5; ++k) v += row[k] * tc.components[k].at(q);
      rec = std::max(rec, std::abs(v - gap.at(q)));
    }
    CHECK(rec <= 1e-8 * max_abs(gap));

    auto few = default_theta_samples();
    few.resize(4);
    CHECK_THROWS_AS(identity_theta_components(a, b, few), InputError);
    auto repeated = default_theta_samples();
    repeated.resize(3);
    repeated.insert(repeated.end(), repeated.begin(), repeated.end());
    CHECK_THROWS_AS(identity_theta_components(a, b, repeated), InputError);
    auto not_null = default_theta_samples();
    not_null[2] = RVec::Unit(3, 0).cast<cplx>();
    CHECK_THROWS_AS(identity_theta_components(a, b, not_null), InputError);
  }

  TEST_CASE("traceless coordinates") {
    Eigen::Matrix3cd G;
    G << 3, 1, 2, 1, 6, 0, 4, 0, 9;
    const auto c = traceless_components(G);
    CHECK(std::abs(c[0] + 3.0) < 1e-15);
    CHECK(std::abs(c[1] - 0.0) < 1e-15);
    CHECK(std::abs(c[3] - 3.0) < 1e-15);
    // Identity has no traceless part, so it is invisible on the null cone.
    const auto id = traceless_components(Eigen::Matrix3cd::Identity());
    for (auto v : id) CHECK(std::abs(v) < 1e-15);
  }

  TEST_CASE("weighted ratio probe") {
    Grid g(3, 96, 4.0);
    const Box box = cube(3, 1.0, 3.0);
    const RVec c = RVec::Constant(3, 2.0);
    const LamePair ref = constant_lame(g, 1.0, 1.0);
    const LamePair p = make_lame(g, [&](const RVec& x) { return 1.0 + 0.1 * smooth_bump(x, c, 0.75); },
                                 [&](const RVec& x) { return 1.0 + 0.2 * smooth_bump(x, c, 0.9); });
    const std::vector<double> alphas{0.5, 1.0, 2.0};
    const auto rows = weighted_ratio_probe(ref, p, alphas, box);
    REQUIRE(rows.size() == 3);
    for (size_t k = 0; k < rows.size(); ++k) {
      const double a = alphas[k];
      const double num = radial_norm([](double r) { return 0.1 * bump(r, 0.75) + 0.2 * bump(r, 0.9); }, a, 0.9);
      const double den = radial_norm([](double r) { return 0.2 * bump(r, 0.9); }, a, 0.9);
      CHECK(std::abs(rows[k].numerator - num) <= 1e-6 * num);
      CHECK(std::abs(rows[k].denominator - den) <= 1e-6 * den);
      CHECK(rows[k].ratio == doctest::Approx(num / den).epsilon(1e-6));
      CHECK(!rows[k].infinite);
    }

    // Equal shear moduli: only the numerator survives.
    const LamePair q = make_lame(g, [&](const RVec& x) { return 1.0 + 0.1 * smooth_bump(x, c, 0.75); },
                                 [](const RVec&) { return 1.0; });
    const auto inf = weighted_ratio_probe(ref, q, {1.0}, box);
    CHECK(inf[0].infinite);
    CHECK(std::isinf(inf[0].ratio));
    const auto zero = weighted_ratio_probe(ref, ref, {1.0}, box);
    CHECK(zero[0].ratio == 0.0);
    CHECK(!zero[0].infinite);
    // lambda + mu unchanged while mu changes: zero numerator.
    const LamePair s = make_lame(g, [&](const RVec& x) { return 1.0 - 0.2 * smooth_bump(x, c, 0.9); },
                                 [&](const RVec& x) { return 1.0 + 0.2 * smooth_bump(x, c, 0.9); });
    const auto zn = weighted_ratio_probe(ref, s, {1.0}, box);
    CHECK(zn[0].numerator < 1e-14);
    CHECK(zn[0].ratio < 1e-13);
    CHECK_THROWS_AS(weighted_ratio_probe(ref, s, {0.0}, box), InputError);
  }
}
