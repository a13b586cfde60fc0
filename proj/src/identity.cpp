#include "cgoforge/identity.hpp"

#include <cmath>
#include <limits>

#include "cgoforge/error.hpp"
#include "cgoforge/spectral.hpp"

namespace cgoforge {

namespace {

Field side(const LamePair& p, const CVec& theta) {
  const Field b = b_field(p);
  const Grid& g = p.grid();
  Field bm(g), im(g);
  for (size_t i = 0; i < g.size(); ++i) {
    bm.at(i) = 1.0 / std::sqrt(b.at(i));
    im.at(i) = 1.0 / p.mu.at(i);
  }
  auto d2 = [&](const Field& f) { return directional_derivative(directional_derivative(f, theta), theta); };
  const Field a = d2(bm), c = d2(im);
  Field out(g);
  for (size_t i = 0; i < g.size(); ++i) out.at(i) = std::sqrt(b.at(i)) * a.at(i) - b.at(i) * c.at(i);
  return out;
}

}  // namespace

Field er2_identity_gap(const LamePair& lame1, const LamePair& lame2, const CVec& theta) {
  lame1.validate();
  lame2.validate();
  if (lame1.grid() != lame2.grid()) throw InputError("identity: Lame pairs live on different grids");
  if (theta.size() != lame1.grid().n) throw InputError("identity: theta dimension differs from grid");
  return side(lame1, theta) - side(lame2, theta);
}

std::array<cplx, 5> traceless_components(const Eigen::Matrix3cd& G) {
  const cplx g = G.trace() / 3.0;
  return {G(0, 0) - g, G(1, 1) - g, 0.5 * (G(0, 1) + G(1, 0)), 0.5 * (G(0, 2) + G(2, 0)),
          0.5 * (G(1, 2) + G(2, 1))};
}

Eigen::Matrix<cplx, 1, 5> theta_monomials(const CVec& t) {
  Eigen::Matrix<cplx, 1, 5> row;
  // Basis E11 - E33, E22 - E33, E12 + E21, E13 + E31, E23 + E32.
  row << t[0] * t[0] - t[2] * t[2], t[1] * t[1] - t[2] * t[2], 2.0 * t[0] * t[1], 2.0 * t[0] * t[2],
      2.0 * t[1] * t[2];
  return row;
}

std::vector<CVec> default_theta_samples() {
  const cplx I(0.0, 1.0);
  std::vector<CVec> out;
  for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}})
    for (double s : {1.0, -1.0}) {
      CVec t = CVec::Zero(3);
      t[a] = 1.0;
      t[b] = s * I;
      out.push_back(t);
    }
  return out;
}

ThetaComponents identity_theta_components(const LamePair& lame1, const LamePair& lame2,
                                          const std::vector<CVec>& thetas) {
  if (thetas.size() < 5) throw InputError("identity: need at least 5 theta samples");
  const auto ns = static_cast<Eigen::Index>(thetas.size());
  Eigen::MatrixXcd M(ns, 5);
  for (Eigen::Index s = 0; s < ns; ++s) {
    const CVec& t = thetas[static_cast<size_t>(s)];
    if (t.size() != 3) throw InputError("identity: theta samples must have 3 components");
    if (std::abs(bdot(t, t)) > 1e-10 * t.squaredNorm())
      throw InputError("identity: theta samples must satisfy theta.theta = 0");
    M.row(s) = theta_monomials(t);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  ThetaComponents out;
  out.thetas = thetas;
  out.condition = sv[4] > 0.0 ? sv[0] / sv[4] : std::numeric_limits<double>::infinity();
  if (!(out.condition < 1e8)) throw InputError("identity: theta samples do not span the quadratic monomials");

  std::vector<Field> gaps;
  for (const auto& t : thetas) gaps.push_back(er2_identity_gap(lame1, lame2, t));
  const Grid& g = lame1.grid();
  out.components.assign(5, Field(g));
  double err = 0.0, scale = 0.0;
  Eigen::VectorXcd y(ns);
  for (size_t i = 0; i < g.size(); ++i) {
    for (Eigen::Index s = 0; s < ns; ++s) y[s] = gaps[static_cast<size_t>(s)].at(i);
    const Eigen::VectorXcd c = svd.solve(y);
    for (int k = 0; k < 5; ++k) out.components[k].at(i) = c[k];
    err = std::max(err, (M * c - y).cwiseAbs().maxCoeff());
    scale = std::max(scale, y.cwiseAbs().maxCoeff());
  }
  out.reconstruction_error = scale > 0.0 ? err / scale : err;
  return out;
}

std::vector<WeightedRatioRow> weighted_ratio_probe(const LamePair& lame1, const LamePair& lame2,
                                                   const std::vector<double>& alphas, const Box& box) {
  lame1.validate();
  lame2.validate();
  const Field num = lame1.lambda + lame1.mu - lame2.lambda - lame2.mu;
  const Field den = lame1.mu - lame2.mu;
  std::vector<WeightedRatioRow> rows;
  for (double a : alphas) {
    if (!(a > 0.0)) throw InputError("weighted ratio: alphas must be positive");
    WeightedRatioRow r;
    r.alpha = a;
    r.numerator = weighted_norm(num, a, box);
    r.denominator = weighted_norm(den, a, box);
    if (r.denominator > 0.0) {
      r.ratio = r.numerator / r.denominator;
    } else if (r.numerator > 0.0) {
      r.ratio = std::numeric_limits<double>::infinity();
      r.infinite = true;
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace cgoforge
