#include "cgoforge/lame.hpp"

#include <cmath>
#include <sstream>

#include "cgoforge/error.hpp"
#include "cgoforge/spectral.hpp"

namespace cgoforge {

namespace {

Field nodewise(const Field& a, const std::function<cplx(cplx)>& fn) {
  Field out(a.grid());
  for (size_t i = 0; i < a.nodes(); ++i) out.at(i) = fn(a.at(i));
  return out;
}

Field nodewise2(const Field& a, const Field& b, const std::function<cplx(cplx, cplx)>& fn) {
  Field out(a.grid());
  for (size_t i = 0; i < a.nodes(); ++i) out.at(i) = fn(a.at(i), b.at(i));
  return out;
}

}  // namespace

void LamePair::validate() const {
  if (lambda.grid() != mu.grid() || lambda.ncomp() != 1 || mu.ncomp() != 1)
    throw InputError("lame: lambda and mu must be scalar fields on one grid");
  for (size_t i = 0; i < mu.nodes(); ++i) {
    const cplx l = lambda.at(i), m = mu.at(i);
    if (!std::isfinite(l.real()) || !std::isfinite(m.real()) || std::abs(l.imag()) > 1e-12 ||
        std::abs(m.imag()) > 1e-12) {
      throw InputError("lame: parameters must be finite and real");
    }
    if (!(m.real() > 0.0) || !(3.0 * l.real() + 2.0 * m.real() > 0.0)) {
      std::ostringstream os;
      os << "lame: need mu > 0 and 3 lambda + 2 mu > 0 (node " << i << ": lambda " << l.real()
         << ", mu " << m.real() << ")";
      throw InputError(os.str());
    }
  }
}

LamePair make_lame(const Grid& g, const std::function<double(const RVec&)>& lambda,
                   const std::function<double(const RVec&)>& mu) {
  LamePair p{sample(g, [&](const RVec& x) { return cplx(lambda(x)); }),
             sample(g, [&](const RVec& x) { return cplx(mu(x)); })};
  p.validate();
  return p;
}

LamePair make_lame(const Grid& g, const JetScalar& lambda, const JetScalar& mu) {
  auto value = [](const JetScalar& f) {
    return [f](const RVec& x) {
      std::array<Jet, 3> j{Jet(x[0]), Jet(x.size() > 1 ? x[1] : 0.0), Jet(x.size() > 2 ? x[2] : 0.0)};
      return f(j).v;
    };
  };
  return make_lame(g, value(lambda), value(mu));
}

LamePair constant_lame(const Grid& g, double lambda, double mu) {
  LamePair p{Field(g, 1, 1, lambda), Field(g, 1, 1, mu)};
  p.validate();
  return p;
}

double smooth_bump(const RVec& x, const RVec& center, double radius) {
  const double r2 = (x - center).squaredNorm() / (radius * radius);
  return r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
}

Jet smooth_bump(const std::array<Jet, 3>& x, const RVec& center, double radius) {
  Jet r2(0.0);
  for (int k = 0; k < 3; ++k) {
    const Jet d = x[k] - Jet(center[k]);
    r2 = r2 + d * d;
  }
  r2 = r2 * Jet(1.0 / (radius * radius));
  if (!(r2.v < 1.0)) return Jet(0.0);
  return exp(Jet(1.0) - inv(Jet(1.0) - r2));
}

Field b_field(const LamePair& p) {
  Field b = nodewise2(p.lambda, p.mu, [](cplx l, cplx m) { return 0.5 * m * (l + m) / (l + 2.0 * m); });
  for (size_t i = 0; i < b.nodes(); ++i)
    if (!(b.at(i).real() > 0.0)) throw InputError("lame: b must be positive");
  return b;
}

Field beta_field(const LamePair& p) {
  return nodewise2(p.lambda, p.mu, [](cplx l, cplx m) { return (l + m) * std::sqrt(m) / (l + 2.0 * m); });
}

Field build_v1(const LamePair& p) {
  p.validate();
  const Grid& g = p.grid();
  const int n = g.n;
  if (n != 3) throw InputError("lame: elasticity requires n = 3");
  Field v(g, 4, 4);
  const Field inv_mu = nodewise(p.mu, [](cplx m) { return 1.0 / m; });
  const Field sqrt_mu = nodewise(p.mu, [](cplx m) { return std::sqrt(m); });
  const std::vector<Field> gi = gradient(inv_mu), gm = gradient(p.mu);
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const Field hij = partial(gi[i], j);
      for (size_t q = 0; q < g.size(); ++q) {
        const cplx e = -2.0 * sqrt_mu.at(q) * hij.at(q);
        v.at(q, i, j) = e;
        v.at(q, j, i) = e;
      }
    }
    for (size_t q = 0; q < g.size(); ++q) v.at(q, i, 3) = -inv_mu.at(q) * gm[i].at(q);
  }
  const Field beta = beta_field(p);
  v.set_component(3, 3, beta);
  return v;
}

Potential elastic_potential(const LamePair& p) {
  const Field v1 = build_v1(p);
  const Grid& g = p.grid();
  Potential pot;
  pot.m = 4;
  pot.B = Field(g, 4, 4);
  for (int k = 0; k < 3; ++k) {
    Field e(g, 4, 4);
    for (size_t q = 0; q < g.size(); ++q) {
      e.at(q, k, 3) = 1.0;
      e.at(q, 3, k) = 1.0;
    }
    Field a = matmul(v1, e);
    a *= cplx(0.0, -0.5);
    pot.A.push_back(std::move(a));
  }
  return pot;
}

TransportSolution elastic_transport(const LamePair& p, const CVec& theta, const CutoffPair& cut,
                                    const TransportOptions& opt) {
  return solve_transport(elastic_potential(p).A, theta, cut, opt);
}

Field c00_explicit(const LamePair& p, const CVec& theta, const CutoffPair& cut, C00Variant variant) {
  p.validate();
  const Grid& g = p.grid();
  Field src = variant == C00Variant::Beta
                  ? nodewise(beta_field(p), [](cplx b) { return -0.5 * b; })
                  : nodewise2(b_field(p), p.mu, [](cplx b, cplx m) { return -b / m; });
  for (size_t q = 0; q < g.size(); ++q) src.at(q) *= cut.psi.at(q);
  const Field phi = SinkAntiderivative(cut, theta).apply(src);
  Field c = identity_field(g, 4);
  for (int k = 0; k < 3; ++k)
    for (size_t q = 0; q < g.size(); ++q) c.at(q, 3, k) = phi.at(q) * theta[k];
  return c;
}

}  // namespace cgoforge
