#include "cgoforge/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <fftw3.h>

#include "cgoforge/error.hpp"

namespace cgoforge {

namespace {

// Planning is not thread-safe in FFTW; execution on new arrays is.
fftw_plan get_plan(const Grid& g, int sign) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(g.n, g.N, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<int> dims(g.n, g.N);
  std::vector<cplx> buf(g.size());
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan =
      fftw_plan_dft(g.n, dims.data(), p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) throw Error("fft: plan creation failed");
  cache.emplace(key, plan);
  return plan;
}

Field transform(const Field& f, int sign) {
  const Grid& g = f.grid();
  fftw_plan plan = get_plan(g, sign);
  Field out = f;
  const double s = 1.0 / std::sqrt(static_cast<double>(g.size()));
  for (int k = 0; k < f.ncomp(); ++k) {
    auto* p = reinterpret_cast<fftw_complex*>(out.values().data() + k * g.size());
    fftw_execute_dft(plan, p, p);
  }
  out *= s;
  return out;
}

std::vector<cplx> per_mode(const Grid& g, const std::function<cplx(const RVec&)>& fn) {
  const auto k = axis_frequencies(g);
  std::vector<cplx> sym(g.size());
  RVec xi(g.n);
  for (size_t i = 0; i < g.size(); ++i) {
    auto idx = g.index(i);
    for (int a = 0; a < g.n; ++a) xi[a] = k[idx[a]];
    sym[i] = fn(xi);
  }
  return sym;
}

}  // namespace

Field fft(const Field& f) { return transform(f, FFTW_FORWARD); }
Field ifft(const Field& f) { return transform(f, FFTW_BACKWARD); }

std::vector<double> axis_frequencies(const Grid& g) {
  std::vector<double> k(g.N);
  const double base = 2.0 * std::numbers::pi / g.L;
  for (int j = 0; j < g.N; ++j) k[j] = base * (j < g.N / 2 ? j : j - g.N);
  return k;
}

std::vector<cplx> theta_dot_xi(const Grid& g, const CVec& theta) {
  if (theta.size() != g.n) throw InputError("theta: dimension mismatch with grid");
  return per_mode(g, [&](const RVec& xi) {
    cplx s = 0.0;
    for (int a = 0; a < g.n; ++a) s += theta[a] * xi[a];
    return s;
  });
}

Field apply_symbol(const Field& f, const std::vector<cplx>& sym) {
  if (sym.size() != f.nodes()) throw InputError("apply_symbol: size mismatch");
  Field F = fft(f);
  const size_t np = f.nodes();
  for (int k = 0; k < f.ncomp(); ++k) {
    cplx* x = F.values().data() + k * np;
    for (size_t i = 0; i < np; ++i) x[i] *= sym[i];
  }
  return ifft(F);
}

Field directional_derivative(const Field& f, const CVec& theta) {
  auto s = theta_dot_xi(f.grid(), theta);
  for (auto& v : s) v *= cplx(0, 1);
  return apply_symbol(f, s);
}

Field partial(const Field& f, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.n) throw InputError("partial: axis out of range");
  return apply_symbol(f, per_mode(g, [&](const RVec& xi) { return cplx(0, xi[axis]); }));
}

std::vector<Field> gradient(const Field& scalar) {
  std::vector<Field> out;
  for (int a = 0; a < scalar.grid().n; ++a) out.push_back(partial(scalar, a));
  return out;
}

Field laplacian(const Field& f) {
  return apply_symbol(f, per_mode(f.grid(), [](const RVec& xi) { return cplx(-xi.squaredNorm()); }));
}

double singular_threshold(const Grid& g) { return 1e-8 * 2.0 * std::numbers::pi / g.L; }

Antiderivative antiderivative(const Field& f, const CVec& theta) {
  const Grid& g = f.grid();
  const auto td = theta_dot_xi(g, theta);
  const double eps = singular_threshold(g);
  Field F = fft(f);
  const size_t np = f.nodes();
  Antiderivative out;
  double total = 0.0, removed = 0.0;
  for (size_t i = 0; i < np; ++i)
    if (std::abs(td[i]) <= eps) ++out.zeroed_modes;
  for (int k = 0; k < f.ncomp(); ++k) {
    cplx* x = F.values().data() + k * np;
    for (size_t i = 0; i < np; ++i) {
      total += std::norm(x[i]);
      if (std::abs(td[i]) <= eps) {
        removed += std::norm(x[i]);
        x[i] = 0.0;
      } else {
        x[i] /= cplx(0, 1) * td[i];
      }
    }
  }
  out.removed_energy_fraction = total > 0.0 ? removed / total : 0.0;
  out.value = ifft(F);
  return out;
}

Field singular_projection(const Field& f, const CVec& theta) {
  const auto td = theta_dot_xi(f.grid(), theta);
  const double eps = singular_threshold(f.grid());
  std::vector<cplx> sym(td.size());
  for (size_t i = 0; i < td.size(); ++i) sym[i] = std::abs(td[i]) <= eps ? 1.0 : 0.0;
  return apply_symbol(f, sym);
}

}  // namespace cgoforge
