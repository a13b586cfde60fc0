#include <cmath>
#include <numbers>

#include "cgoforge/error.hpp"
#include "cgoforge/frames.hpp"
#include "doctest.h"

using namespace cgoforge;

namespace {

RVec e(int n, int k) { return RVec::Unit(n, k); }

// Long-double evaluation of zeta, delta and the null/pairing invariants.
struct HpFrame {
  long double zr[3], zi[3];  // delta
};

HpFrame hp_delta(const RVec& mu, const RVec& nu, const RVec& l, long double tau) {
  long double l2 = 0;
  for (int k = 0; k < 3; ++k) l2 += (long double)l[k] * l[k];
  const long double s = std::sqrt(tau * tau - l2 / 4);
  HpFrame f{};
  for (int k = 0; k < 3; ++k) {
    f.zr[k] = (long double)l[k] / 2 + s * mu[k];
    f.zi[k] = tau * nu[k];
  }
  return f;
}

}  // namespace

TEST_SUITE("frames") {
  TEST_CASE("l = 0 forces zeta = tau mu") {
    auto f = build_frame(e(3, 0), e(3, 1), RVec::Zero(3), 5.0);
    CHECK(std::abs(f.delta[0] - cplx(5, 0)) < 1e-14);
    CHECK(std::abs(f.delta[1] - cplx(0, 5)) < 1e-14);
    CHECK(std::abs(bdot(f.delta, f.delta)) < 1e-12);
    CHECK(f.delta_prime.norm() < 1e-14);
  }

  TEST_CASE("l = 2 e3, tau = 10 against long-double oracle") {
    auto f = build_frame(e(3, 0), e(3, 1), 2.0 * e(3, 2), 10.0);
    CHECK(f.zeta[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.zeta[0] == doctest::Approx(std::sqrt(99.0)).epsilon(1e-15));
    auto hp = hp_delta(f.mu, f.nu, f.l, 10.0L);
    long double re = 0, im = 0;
    for (int k = 0; k < 3; ++k) {
      re += hp.zr[k] * hp.zr[k] - hp.zi[k] * hp.zi[k];
      im += 2 * hp.zr[k] * hp.zi[k];
      CHECK(std::abs((double)hp.zr[k] - f.delta[k].real()) < 1e-13);
      CHECK(std::abs((double)hp.zi[k] - f.delta[k].imag()) < 1e-13);
    }
    CHECK(std::abs((double)re) < 1e-12);
    CHECK(std::abs((double)im) < 1e-12);
    CHECK(std::abs(bdot(f.delta, f.delta)) < 1e-10);
    CHECK((f.delta_prime - 0.5 * f.l.cast<cplx>()).norm() <= f.l.squaredNorm() / (8 * f.tau) * 1.01);
  }

  TEST_CASE("invalid inputs name the violated condition") {
    auto msg = [](auto fn) {
      try {
        fn();
      } catch (const InputError& err) {
        return std::string(err.what());
      }
      return std::string();
    };
    CHECK(msg([] { build_frame(e(3, 0), e(3, 0), RVec::Zero(3), 5); }).find("mu.nu") != std::string::npos);
    CHECK(msg([] { build_frame(2 * e(3, 0), e(3, 1), RVec::Zero(3), 5); }).find("|mu|") != std::string::npos);
    CHECK(msg([] { build_frame(e(3, 0), e(3, 1), e(3, 0), 5); }).find("mu.l") != std::string::npos);
    CHECK(msg([] { build_frame(e(3, 0), e(3, 1), 4 * e(3, 2), 2); }).find("tau") != std::string::npos);
  }

  TEST_CASE("conjugate frame: null and pairing identities") {
    for (double tau : {1.5, 4.0, 33.0}) {
      auto f = build_frame(e(3, 0), e(3, 1), 2.5 * e(3, 2), tau);
      auto g = conjugate_frame(f);
      CHECK((g.delta - (f.delta.conjugate() - f.l.cast<cplx>())).norm() < 1e-12);
      CHECK((f.delta - g.delta.conjugate() - f.l.cast<cplx>()).norm() < 1e-12);
      CHECK(std::abs(bdot(g.delta, g.delta)) < 1e-10 * tau * tau);
      auto h = conjugate_frame(g);
      CHECK((h.delta - f.delta).norm() < 1e-12);
    }
    auto f0 = build_frame(e(3, 0), e(3, 1), RVec::Zero(3), 3.0);
    CHECK((conjugate_frame(f0).delta - f0.delta.conjugate()).norm() < 1e-14);
  }

  TEST_CASE("rotate_theta") {
    auto f = build_frame(e(3, 0), e(3, 1), 1.0 * e(3, 2), 6.0);
    auto r0 = rotate_theta(f, 0.0);
    CHECK((r0.mu - f.mu).norm() < 1e-15);
    CHECK((r0.nu - f.nu).norm() < 1e-15);
    auto r1 = rotate_theta(f, std::numbers::pi / 2);
    CHECK((r1.mu + f.nu).norm() < 1e-15);
    CHECK((r1.nu - f.mu).norm() < 1e-15);
    auto r2 = rotate_theta(f, std::numbers::pi);
    CHECK((r2.mu + f.mu).norm() < 1e-15);
    CHECK((r2.nu + f.nu).norm() < 1e-15);
    CHECK((r1.theta - cplx(0, 1) * f.theta).norm() < 1e-15);
    auto ab = rotate_theta(rotate_theta(f, 0.3), 1.1);
    auto s = rotate_theta(f, 1.4);
    CHECK((ab.theta - s.theta).norm() < 1e-12);
    CHECK((ab.delta - s.delta).norm() < 1e-12 * f.tau);
  }

  TEST_CASE("theta(l/|l|) rule and json round trip") {
    auto f = frame_for_l(2.0 * e(3, 2), 8.0);
    CHECK((f.mu - e(3, 0)).norm() < 1e-15);
    CHECK((f.nu - e(3, 1)).norm() < 1e-15);
    RVec l(3);
    l << 0.3, -0.4, 1.2;
    auto g = frame_for_l(l, 4.0);
    CHECK(std::abs(g.mu.dot(l)) < 1e-12);
    CHECK(std::abs(g.nu.dot(l)) < 1e-12);
    // Right-handed (mu, nu, l/|l|).
    CHECK(Eigen::Vector3d(g.mu).cross(Eigen::Vector3d(g.nu)).dot(Eigen::Vector3d(l)) > 0.0);
    auto j = frame_to_json(g);
    auto h = frame_from_json(j);
    CHECK((h.delta - g.delta).norm() < 1e-14);
    CHECK(j.contains("mu"));
    CHECK(j.contains("tau"));
  }

  TEST_CASE("n = 2 frames are flagged out of scope") {
    auto f = build_frame(e(2, 0), e(2, 1), RVec::Zero(2), 3.0);
    CHECK_FALSE(f.in_scope());
  }
}
