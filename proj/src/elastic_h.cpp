#include "cgoforge/elastic_h.hpp"

#include <cmath>
#include <sstream>
#include <thread>

#include "cgoforge/error.hpp"
#include "cgoforge/spectral.hpp"

namespace cgoforge {

namespace {

Field map_scalar(const Field& a, cplx (*fn)(cplx)) {
  Field out(a.grid());
  for (size_t i = 0; i < a.nodes(); ++i) out.at(i) = fn(a.at(i));
  return out;
}

cplx inv_c(cplx z) { return 1.0 / z; }
cplx inv_sqrt_c(cplx z) { return 1.0 / std::sqrt(z); }

void require_vector3(const Field& f, const char* what) {
  if (f.grid().n != 3 || f.rows() != 3 || f.cols() != 1)
    throw InputError(std::string(what) + ": expected a 3 x 1 field on a 3-d grid");
}

Field with_delta(const Field& f, int j, const CVec& delta) {
  Field d = partial(f, j);
  if (delta.size() > 0 && delta[j] != cplx(0.0)) d += cplx(0.0, 1.0) * delta[j] * f;
  return d;
}

template <class Deriv>
Field reduce_generic(const Field& u, const Field& f, const Field& mu, Deriv&& deriv) {
  require_vector3(u, "aity_reduce");
  const Field inv = map_scalar(mu, inv_c), q = map_scalar(mu, inv_sqrt_c);
  Field w(u.grid(), 3, 1);
  for (int j = 0; j < 3; ++j) {
    const Field dfj = deriv(f, j), dinv = partial(inv, j);
    for (size_t i = 0; i < u.nodes(); ++i)
      w.at(i, j) = q.at(i) * u.at(i, j) + inv.at(i) * dfj.at(i) - f.at(i) * dinv.at(i);
  }
  return w;
}

template <class Deriv>
Strain strain_generic(const Field& w, Deriv&& deriv) {
  require_vector3(w, "strain");
  const Grid& g = w.grid();
  std::vector<std::vector<Field>> d(3);  // d[j][k] = D_j w^k
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) d[j].push_back(deriv(w.component(k), j));
  Strain s{Field(g), Field(g, 3, 3)};
  for (size_t i = 0; i < g.size(); ++i) {
    cplx div = 0.0;
    for (int j = 0; j < 3; ++j) {
      div += d[j][j].at(i);
      for (int k = 0; k < 3; ++k) s.eps.at(i, j, k) = d[j][k].at(i) + d[k][j].at(i);
    }
    s.div.at(i) = div;
  }
  return s;
}

void check_pairs(const LamePair& a, const LamePair& b) {
  a.validate();
  b.validate();
  if (a.grid() != b.grid()) throw InputError("elastic: Lame pairs live on different grids");
}

Field phase_field(const Grid& g, const RVec& l) {
  return sample(g, [&](const RVec& x) { return std::exp(cplx(0.0, l.dot(x))); });
}

}  // namespace

Field aity_reduce(const Field& u, const Field& f, const Field& mu) {
  return reduce_generic(u, f, mu, [](const Field& x, int j) { return partial(x, j); });
}

Field aity_reduce_amplitude(const Field& r, const Field& s, const Field& mu, const CVec& delta) {
  return reduce_generic(r, s, mu, [&](const Field& x, int j) { return with_delta(x, j, delta); });
}

Field aity_reduce_fd(const Field& u, const Field& f, const Field& mu, const BoxDomain& dom) {
  require_vector3(u, "aity_reduce");
  const Field inv = map_scalar(mu, inv_c), q = map_scalar(mu, inv_sqrt_c);
  Field w(u.grid(), 3, 1);
  for (int j = 0; j < 3; ++j) {
    const Field dfj = box_partial(f, dom, j), dinv = box_partial(inv, dom, j);
    for (size_t i = 0; i < u.nodes(); ++i)
      w.at(i, j) = q.at(i) * u.at(i, j) + inv.at(i) * dfj.at(i) - f.at(i) * dinv.at(i);
  }
  return w;
}

Strain strain_spectral(const Field& w, const CVec& delta) {
  return strain_generic(w, [&](const Field& x, int j) { return with_delta(x, j, delta); });
}

Strain strain_fd(const Field& w, const BoxDomain& dom) {
  return strain_generic(w, [&](const Field& x, int j) { return box_partial(x, dom, j); });
}

cplx h_integral(const LamePair& lame1, const LamePair& lame2, const Strain& s1, const Strain& s2,
                const Box& omega, const Field* phase) {
  check_pairs(lame1, lame2);
  const Grid& g = lame1.grid();
  const auto wts = trapezoid_weights(g, omega);
  cplx acc = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    if (wts[i] == 0.0) continue;
    const cplx dl = lame2.lambda.at(i) - lame1.lambda.at(i), dm = lame2.mu.at(i) - lame1.mu.at(i);
    if (dl == cplx(0.0) && dm == cplx(0.0)) continue;
    cplx e = 0.0;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) e += std::conj(s2.eps.at(i, j, k)) * s1.eps.at(i, j, k);
    cplx v = dl * std::conj(s2.div.at(i)) * s1.div.at(i) + 0.5 * dm * e;
    if (phase) v *= phase->at(i);
    acc += wts[i] * v;
  }
  return acc;
}

cplx h_functional(const LamePair& lame1, const LamePair& lame2, const Field& w1, const Field& w2,
                  const Box& omega) {
  const CVec none;
  return h_integral(lame1, lame2, strain_spectral(w1, none), strain_spectral(w2, none), omega);
}

cplx h_functional_fd(const LamePair& lame1, const LamePair& lame2, const Field& w1, const Field& w2,
                     const BoxDomain& dom) {
  return h_integral(lame1, lame2, strain_fd(w1, dom), strain_fd(w2, dom), dom.box);
}

cplx face_pairing(const BoxDomain& dom, const CArray& a, const CArray& b) {
  const size_t nf = dom.face_count() * 3;
  if (a.size() < nf || b.size() < nf) throw InputError("face pairing: vectors shorter than the face data");
  cplx s = 0.0;
  for (size_t i = 0; i < nf; ++i) s += a[i] * std::conj(b[i]);
  return s * dom.h * dom.h;
}

cplx boundary_pairing(const BoxDomain& dom, const CArray& traction, const CArray& data) {
  if (traction.size() != dom.face_count() * 3 || data.size() != dom.boundary_count() * 3)
    throw InputError("boundary pairing: vector lengths do not match the domain");
  cplx s = face_pairing(dom, traction, data);
  const double w = 0.5 * dom.h * dom.h;
  for (size_t e = dom.face_count(); e < dom.boundary_count(); ++e) {
    const auto li = dom.boundary_local[e];
    std::array<int, 2> axes{-1, -1};
    int na = 0;
    for (int a = 0; a < 3; ++a)
      if (li[a] == 0 || li[a] == dom.cells[a]) axes[na++] = a;
    for (int f = 0; f < 2; ++f) {
      const int b = axes[1 - f];  // the face is normal to axes[f]; step inward along b
      const int step = li[b] == 0 ? 1 : -1;
      auto l1 = li, l2 = li;
      l1[b] += step;
      l2[b] += 2 * step;
      const size_t n1 = static_cast<size_t>(-2 - dom.role(l1)), n2 = static_cast<size_t>(-2 - dom.role(l2));
      for (int k = 0; k < 3; ++k) {
        const cplx t = 2.0 * traction[n1 * 3 + k] - traction[n2 * 3 + k];
        s += w * t * std::conj(data[e * 3 + k]);
      }
    }
  }
  return s;
}

GreenCheck h_green_check(const LamePair& lame1, const LamePair& lame2, const BoxDomain& dom,
                         const CArray& h1, const CArray& h2) {
  const ElasticProblem p1(lame1, dom), p2(lame2, dom);
  const ElasticSolution s1 = p1.solve(h1), s2 = p2.solve(h2);
  GreenCheck g;
  g.volume = h_functional_fd(lame1, lame2, s1.w, s2.w, dom);
  g.boundary =
      std::conj(boundary_pairing(dom, p2.traction(h2), h1)) - boundary_pairing(dom, p1.traction(h1), h2);
  g.difference = std::abs(g.volume - g.boundary);
  return g;
}

Field navier_amplitude(const LamePair& lame, const Field& W, const CVec& delta) {
  const Strain s = strain_spectral(W, delta);
  const Grid& g = W.grid();
  Field out(g, 3, 1);
  Field ldiv(g);
  for (size_t i = 0; i < g.size(); ++i) ldiv.at(i) = lame.lambda.at(i) * s.div.at(i);
  for (int k = 0; k < 3; ++k) {
    Field acc = with_delta(ldiv, k, delta);
    for (int j = 0; j < 3; ++j) {
      Field me(g);
      for (size_t i = 0; i < g.size(); ++i) me.at(i) = lame.mu.at(i) * s.eps.at(i, j, k);
      acc += with_delta(me, j, delta);
    }
    out.set_component(k, 0, acc);
  }
  return out;
}

ElasticCgo cgo_elastic_solution(const LamePair& lame, const Frame& frame, const CVec& p, int n,
                                const CutoffPair& cut, const CgoOptions& opt, const TransportSolution* c0) {
  if (p.size() != 4) throw InputError("elastic cgo: p must have 4 components");
  const Potential pot = elastic_potential(lame);
  ElasticCgo out;
  out.expansion = build_expansion(pot, frame, PolyVector::constant(p), n, cut, opt, c0);
  Field v = out.expansion.terms[0];
  for (size_t k = 1; k < out.expansion.terms.size(); ++k) v += out.expansion.terms[k];
  const Grid& g = lame.grid();
  out.r = Field(g, 3, 1);
  for (int k = 0; k < 3; ++k) out.r.set_component(k, 0, v.component(k));
  out.s = v.component(3);
  out.W = aity_reduce_amplitude(out.r, out.s, lame.mu, frame.delta);
  const Mask region = mask_where_one(cut.psi);
  out.system_residual = expansion_residual(out.expansion, pot, region);
  const double nw = l2_norm(out.W, region) * frame.delta.squaredNorm();
  out.reduced_residual = nw > 0.0 ? l2_norm(navier_amplitude(lame, out.W, frame.delta), region) / nw : 0.0;
  return out;
}

VMatrix v_matrix(const LamePair& lame1, const LamePair& lame2, const CVec& theta, const Field* psi) {
  check_pairs(lame1, lame2);
  const Grid& g = lame1.grid();
  VMatrix m;
  m.b1 = b_field(lame1);
  m.b2 = b_field(lame2);
  const Field inv1 = map_scalar(lame1.mu, inv_c), inv2 = map_scalar(lame2.mu, inv_c);
  m.a1 = directional_derivative(directional_derivative(inv1, theta), theta);
  m.a2 = directional_derivative(directional_derivative(inv2, theta), theta);
  Field db1 = directional_derivative(m.b1, theta), db2 = directional_derivative(m.b2, theta);
  m.V = Field(g, 2, 2);
  for (size_t i = 0; i < g.size(); ++i) {
    const cplx l1 = lame1.lambda.at(i), u1 = lame1.mu.at(i), l2 = lame2.lambda.at(i), u2 = lame2.mu.at(i);
    const cplx dm = 1.0 / u2 - 1.0 / u1;
    const cplx cut = psi ? psi->at(i) : cplx(1.0);
    m.V.at(i, 0, 0) = (l1 + u1 - l2 - u2) * std::sqrt(u1 * u2) / ((l1 + 2.0 * u1) * (l2 + 2.0 * u2));
    m.V.at(i, 0, 1) = 2.0 * dm / std::sqrt(u2) * cut * db2.at(i);
    m.V.at(i, 1, 0) = 2.0 * dm / std::sqrt(u1) * cut * db1.at(i);
    m.V.at(i, 1, 1) = 2.0 * dm * (m.b1.at(i) * m.a1.at(i) + m.b2.at(i) * m.a2.at(i));
  }
  return m;
}

H2Direct h2_direct(const LamePair& lame1, const LamePair& lame2, const Frame& frame, const Field& C1,
                   const Field& C2, const CVec& p, const Box& omega, const Field* psi) {
  if (p.size() != 4) throw InputError("h2_direct: p must have 4 components");
  const Grid& g = lame1.grid();
  const CVec& th = frame.theta;
  const VMatrix vm = v_matrix(lame1, lame2, th, psi);
  const Field phase = phase_field(g, frame.l);
  const auto wts = trapezoid_weights(g, omega);
  cplx acc = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    if (wts[i] == 0.0) continue;
    cplx v1[4], v2[4];
    for (int r = 0; r < 4; ++r) {
      v1[r] = v2[r] = 0.0;
      for (int c = 0; c < 4; ++c) {
        v1[r] += C1.at(i, r, c) * p[c];
        v2[r] += C2.at(i, r, c) * p[c];
      }
    }
    cplx R1 = 0.0, R2 = 0.0;
    for (int j = 0; j < 3; ++j) {
      R1 += th[j] * v1[j];
      R2 += th[j] * std::conj(v2[j]);
    }
    const cplx s1 = v1[3], S2 = std::conj(v2[3]);
    const cplx integrand = R2 * vm.V.at(i, 0, 0) * R1 + R2 * vm.V.at(i, 0, 1) * s1 +
                           S2 * vm.V.at(i, 1, 0) * R1 + S2 * vm.V.at(i, 1, 1) * s1;
    acc += wts[i] * phase.at(i) * integrand;
  }
  return {-acc, acc};
}

HSeries fit_h_series(const std::vector<double>& taus, const std::vector<cplx>& values, int coefficients) {
  if (coefficients < 3) throw InputError("h series: need at least 3 coefficients (H2, H1, H0)");
  if (taus.size() != values.size()) throw InputError("h series: taus and values differ in length");
  if (taus.size() < static_cast<size_t>(coefficients) + 2) {
    std::ostringstream os;
    os << "h series: " << coefficients << " coefficients need at least " << coefficients + 2 << " tau samples";
    throw InputError(os.str());
  }
  auto powers = [](int k) {
    std::vector<int> p;
    for (int j = 0; j < k; ++j) p.push_back(2 - j);
    return p;
  };
  HSeries s;
  s.taus = taus;
  s.values = values;
  s.fit = fit_powers(taus, values, powers(coefficients));
  if (s.fit.ill_conditioned) {
    s.flagged = true;
    std::ostringstream os;
    os << "ill-conditioned fit (condition " << s.fit.condition_number << "); coefficients beyond H0 suppressed";
    s.note = os.str();
    if (coefficients > 3) s.fit = fit_powers(taus, values, powers(3));
  }
  s.h2 = s.fit.coefficients[0];
  s.h1 = s.fit.coefficients[1];
  s.h0 = s.fit.coefficients[2];
  return s;
}

HSeriesResult h_series_fit(const LamePair& lame1, const LamePair& lame2, const HSeriesConfig& cfg) {
  check_pairs(lame1, lame2);
  if (cfg.taus.empty()) throw InputError("h series: no tau samples");
  if (cfg.p.size() != 4) throw InputError("h series: p must have 4 components");
  const Grid& g = lame1.grid();
  const CutoffPair cut = make_cutoffs(g, cfg.omega, cfg.margins);
  HSeriesResult out;
  out.frame = frame_for_l(cfg.l, cfg.taus[0]);
  const Frame conj0 = conjugate_frame(out.frame);
  const TransportSolution t1 = elastic_transport(lame1, out.frame.theta, cut, cfg.cgo.transport);
  const TransportSolution t2 = elastic_transport(lame2, conj0.theta, cut, cfg.cgo.transport);
  out.direct = h2_direct(lame1, lame2, out.frame, t1.C, t2.C, cfg.p, cfg.omega, &cut.psi);

  const Field phase = phase_field(g, cfg.l);
  std::vector<cplx> values(cfg.taus.size());
  std::vector<std::string> errors(cfg.taus.size());
  const int jobs = std::max(1, cfg.jobs);
  auto work = [&](size_t start) {
    for (size_t i = start; i < cfg.taus.size(); i += static_cast<size_t>(jobs)) {
      try {
        const Frame f1 = frame_for_l(cfg.l, cfg.taus[i]);
        const Frame f2 = conjugate_frame(f1);
        const ElasticCgo w1 = cgo_elastic_solution(lame1, f1, cfg.p, cfg.order, cut, cfg.cgo, &t1);
        const ElasticCgo w2 = cgo_elastic_solution(lame2, f2, cfg.p, cfg.order, cut, cfg.cgo, &t2);
        values[i] = h_integral(lame1, lame2, strain_spectral(w1.W, f1.delta), strain_spectral(w2.W, f2.delta),
                               cfg.omega, &phase);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(work, static_cast<size_t>(t));
  work(0);
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (!e.empty()) throw SolverError("h series: " + e, 0.0);
  out.series = fit_h_series(cfg.taus, values, cfg.coefficients);
  return out;
}

cplx box_fourier_integral(const Box& b, const RVec& l) {
  cplx v = 1.0;
  for (int a = 0; a < b.dim(); ++a) {
    const double k = l[a];
    if (std::abs(k) < 1e-14)
      v *= b.hi[a] - b.lo[a];
    else
      v *= (std::exp(cplx(0.0, k * b.hi[a])) - std::exp(cplx(0.0, k * b.lo[a]))) / cplx(0.0, k);
  }
  return v;
}

QuarticStudy h0_quartic_study(const Grid& g, double lambda1, double mu1, double lambda2, double mu2,
                              const RVec& direction, const std::vector<double>& lnorms,
                              const HSeriesConfig& base) {
  if (lnorms.empty()) throw InputError("quartic study: no |l| values");
  const LamePair p1 = constant_lame(g, lambda1, mu1), p2 = constant_lame(g, lambda2, mu2);
  QuarticStudy q;
  q.lnorms = lnorms;
  q.c_expected = (mu2 - mu1) / (2.0 * mu1 * mu2);
  const RVec dir = direction.normalized();
  double num = 0.0, den = 0.0;
  for (double ln : lnorms) {
    HSeriesConfig cfg = base;
    cfg.l = ln * dir;
    cfg.p = CVec::Zero(4);
    cfg.p[3] = 1.0;
    const HSeriesResult r = h_series_fit(p1, p2, cfg);
    const cplx z = r.series.h0 / box_fourier_integral(cfg.omega, cfg.l);
    q.h0.push_back(r.series.h0);
    q.normalized.push_back(z);
    const double l4 = std::pow(ln, 4);
    num += l4 * z.real();
    den += l4 * l4;
  }
  q.c_fit = num / den;
  q.relative_error = q.c_expected != 0.0 ? std::abs(q.c_fit - q.c_expected) / std::abs(q.c_expected)
                                         : std::abs(q.c_fit);
  return q;
}

}  // namespace cgoforge
