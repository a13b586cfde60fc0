#include "cgoforge/frames.hpp"

#include <cmath>
#include <sstream>

#include "cgoforge/error.hpp"

namespace cgoforge {

namespace {

constexpr double kOrthoTol = 1e-12;

void require(bool ok, const std::string& msg) {
  if (!ok) throw InputError("frame: " + msg);
}

std::vector<double> to_std(const RVec& v) { return {v.data(), v.data() + v.size()}; }

RVec from_std(const std::vector<double>& v) {
  RVec r(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) r[static_cast<Eigen::Index>(i)] = v[i];
  return r;
}

}  // namespace

cplx bdot(const CVec& a, const CVec& b) { return (a.array() * b.array()).sum(); }

Frame build_frame(const RVec& mu, const RVec& nu, const RVec& l, double tau) {
  const auto n = mu.size();
  require(n >= 2, "dimension must be at least 2");
  require(nu.size() == n && l.size() == n, "mu, nu, l must have equal length");
  require(std::isfinite(tau) && mu.allFinite() && nu.allFinite() && l.allFinite(),
          "non-finite input");
  require(std::abs(mu.norm() - 1.0) <= kOrthoTol, "|mu| != 1");
  require(std::abs(nu.norm() - 1.0) <= kOrthoTol, "|nu| != 1");
  const double lscale = std::max(1.0, l.norm());
  require(std::abs(mu.dot(nu)) <= kOrthoTol, "mu.nu != 0");
  require(std::abs(mu.dot(l)) <= kOrthoTol * lscale, "mu.l != 0");
  require(std::abs(nu.dot(l)) <= kOrthoTol * lscale, "nu.l != 0");
  require(tau > 0.5 * l.norm(), "tau must exceed |l|/2");

  Frame f;
  f.mu = mu;
  f.nu = nu;
  f.l = l;
  f.tau = tau;
  const double s = std::sqrt(tau * tau - 0.25 * l.squaredNorm());
  f.theta = mu.cast<cplx>() + cplx(0, 1) * nu.cast<cplx>();
  f.zeta = 0.5 * l + s * mu;
  f.delta = f.zeta.cast<cplx>() + cplx(0, tau) * nu.cast<cplx>();
  f.delta_prime = f.delta - tau * f.theta;

  const double scale = tau * tau + l.squaredNorm();
  if (std::abs(bdot(f.delta, f.delta)) > 1e-10 * std::max(1.0, scale) ||
      std::abs(bdot(f.theta, f.theta)) > 1e-12) {
    std::ostringstream os;
    os << "null invariant violated (delta.delta=" << bdot(f.delta, f.delta) << ")";
    throw InputError("frame: " + os.str());
  }
  return f;
}

Frame conjugate_frame(const Frame& f) { return build_frame(f.mu, -f.nu, -f.l, f.tau); }

Frame rotate_theta(const Frame& f, double omega) {
  const double c = std::cos(omega), s = std::sin(omega);
  RVec mu = c * f.mu - s * f.nu;
  RVec nu = s * f.mu + c * f.nu;
  // Renormalize rounding only; orthogonality is preserved by the rotation.
  mu /= mu.norm();
  nu -= nu.dot(mu) * mu;
  nu /= nu.norm();
  return build_frame(mu, nu, f.l, f.tau);
}

Frame frame_for_l(const RVec& l, double tau) {
  const auto n = l.size();
  const double ln = l.norm();
  if (ln == 0.0) {
    require(n >= 2, "dimension must be at least 2");
    return build_frame(RVec::Unit(n, 0), RVec::Unit(n, 1), l, tau);
  }
  require(n == 3, "theta(l/|l|) requires n = 3");
  const Eigen::Vector3d e = l / ln;
  int k = 0;
  for (int j = 1; j < 3; ++j)
    if (std::abs(e[j]) < std::abs(e[k])) k = j;
  Eigen::Vector3d mu = Eigen::Vector3d::Unit(k) - e[k] * e;
  mu.normalize();
  Eigen::Vector3d nu = e.cross(mu);
  nu.normalize();
  return build_frame(mu, nu, l, tau);
}

nlohmann::json frame_to_json(const Frame& f) {
  auto split = [](const CVec& v) {
    std::vector<double> re, im;
    for (auto z : v) {
      re.push_back(z.real());
      im.push_back(z.imag());
    }
    return nlohmann::json{{"re", re}, {"im", im}};
  };
  return {{"mu", to_std(f.mu)},       {"nu", to_std(f.nu)},
          {"l", to_std(f.l)},         {"tau", f.tau},
          {"theta", split(f.theta)},  {"delta", split(f.delta)},
          {"delta_prime", split(f.delta_prime)}};
}

Frame frame_from_json(const nlohmann::json& j) {
  try {
    return build_frame(from_std(j.at("mu").get<std::vector<double>>()),
                       from_std(j.at("nu").get<std::vector<double>>()),
                       from_std(j.at("l").get<std::vector<double>>()),
                       j.at("tau").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("frame json: ") + e.what());
  }
}

}  // namespace cgoforge
