#pragma once
// Second-order forward-mode jets in three variables: value, gradient, Hessian.

#include <array>
#include <cmath>

namespace cgoforge {

struct Jet {
  double v = 0.0;
  std::array<double, 3> g{};
  std::array<double, 9> H{};  // row-major

  Jet() = default;
  Jet(double c) : v(c) {}  // NOLINT: constants promote implicitly
  static Jet variable(double x, int k) {
    Jet j(x);
    j.g[k] = 1.0;
    return j;
  }
  double d(int a) const { return g[a]; }
  double dd(int a, int b) const { return H[3 * a + b]; }
};

// Composition f(u) given f, f', f'' at u.v.
inline Jet compose(const Jet& u, double f0, double f1, double f2) {
  Jet r(f0);
  for (int a = 0; a < 3; ++a) r.g[a] = f1 * u.g[a];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r.H[3 * a + b] = f1 * u.H[3 * a + b] + f2 * u.g[a] * u.g[b];
  return r;
}

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r(a.v + b.v);
  for (int i = 0; i < 3; ++i) r.g[i] = a.g[i] + b.g[i];
  for (int i = 0; i < 9; ++i) r.H[i] = a.H[i] + b.H[i];
  return r;
}
inline Jet operator-(const Jet& a) {
  Jet r(-a.v);
  for (int i = 0; i < 3; ++i) r.g[i] = -a.g[i];
  for (int i = 0; i < 9; ++i) r.H[i] = -a.H[i];
  return r;
}
inline Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }
inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.v * b.v);
  for (int i = 0; i < 3; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.H[3 * i + j] = a.v * b.H[3 * i + j] + b.v * a.H[3 * i + j] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
  return r;
}
inline Jet inv(const Jet& a) { return compose(a, 1.0 / a.v, -1.0 / (a.v * a.v), 2.0 / (a.v * a.v * a.v)); }
inline Jet operator/(const Jet& a, const Jet& b) { return a * inv(b); }
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return compose(a, e, e, e);
}
inline Jet sin(const Jet& a) { return compose(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet cos(const Jet& a) { return compose(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Jet pow(const Jet& a, double p) {
  return compose(a, std::pow(a.v, p), p * std::pow(a.v, p - 1), p * (p - 1) * std::pow(a.v, p - 2));
}
inline Jet sqrt(const Jet& a) { return pow(a, 0.5); }

using JetFn = Jet (*)(const std::array<Jet, 3>&);

inline std::array<Jet, 3> jet_point(double x, double y, double z) {
  return {Jet::variable(x, 0), Jet::variable(y, 1), Jet::variable(z, 2)};
}

}  // namespace cgoforge
