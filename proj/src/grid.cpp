#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "cgoforge/error.hpp"
#include "cgoforge/field.hpp"

namespace cgoforge {

Grid::Grid(int dim, int points, double period) : n(dim), N(points), L(period) {
  if (n != 2 && n != 3) throw InputError("grid: dimension must be 2 or 3");
  if (N < 8) throw InputError("grid: points_per_axis must be >= 8");
  if (!(L > 0.0) || !std::isfinite(L)) throw InputError("grid: period must be positive");
}

size_t Grid::size() const {
  size_t s = 1;
  for (int a = 0; a < n; ++a) s *= static_cast<size_t>(N);
  return s;
}

std::array<int, 3> Grid::index(size_t node) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = n - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(node % N);
    node /= N;
  }
  return idx;
}

size_t Grid::node(const std::array<int, 3>& idx) const {
  size_t s = 0;
  for (int a = 0; a < n; ++a) s = s * N + static_cast<size_t>(((idx[a] % N) + N) % N);
  return s;
}

RVec Grid::point(size_t node) const {
  auto idx = index(node);
  RVec x(n);
  for (int a = 0; a < n; ++a) x[a] = coord(idx[a]);
  return x;
}

bool Box::contains(const RVec& x, double tol) const {
  for (int a = 0; a < dim(); ++a)
    if (x[a] < lo[a] - tol || x[a] > hi[a] + tol) return false;
  return true;
}

Box cube(int n, double lo, double hi) { return {RVec::Constant(n, lo), RVec::Constant(n, hi)}; }

Field::Field(const Grid& g, int rows, int cols, cplx fill)
    : grid_(g), rows_(rows), cols_(cols),
      values_(g.size() * static_cast<size_t>(rows) * cols, fill) {
  if (rows < 1 || cols < 1) throw InputError("field: shape must be positive");
}

Field Field::component(int r, int c) const {
  Field s(grid_);
  std::copy(comp(r, c), comp(r, c) + nodes(), s.comp(0));
  return s;
}

Field Field::column(int c) const {
  Field v(grid_, rows_, 1);
  for (int r = 0; r < rows_; ++r) std::copy(comp(r, c), comp(r, c) + nodes(), v.comp(r));
  return v;
}

void Field::set_component(int r, int c, const Field& s) {
  if (s.grid() != grid_ || s.ncomp() != 1) throw InputError("field: component shape mismatch");
  std::copy(s.comp(0), s.comp(0) + nodes(), comp(r, c));
}

void Field::set_column(int c, const Field& v) {
  if (v.grid() != grid_ || v.rows() != rows_ || v.cols() != 1)
    throw InputError("field: column shape mismatch");
  for (int r = 0; r < rows_; ++r) std::copy(v.comp(r), v.comp(r) + nodes(), comp(r, c));
}

Field& Field::operator+=(const Field& o) {
  if (!same_shape(o)) throw InputError("field: shape mismatch in +");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  if (!same_shape(o)) throw InputError("field: shape mismatch in -");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

Field& Field::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

Field Field::conj() const {
  Field r = *this;
  for (auto& v : r.values_) v = std::conj(v);
  return r;
}

bool Field::all_finite() const {
  for (auto v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx s, Field a) { return a *= s; }
Field operator-(Field a) { return a *= -1.0; }

Field sample(const Grid& g, const std::function<cplx(const RVec&)>& f) {
  Field out(g);
  for (size_t i = 0; i < g.size(); ++i) out.at(i) = f(g.point(i));
  return out;
}

Field identity_field(const Grid& g, int m) {
  Field I(g, m, m);
  for (int r = 0; r < m; ++r) std::fill(I.comp(r, r), I.comp(r, r) + g.size(), cplx(1.0));
  return I;
}

Field matmul(const Field& a, const Field& b) {
  if (a.grid() != b.grid() || a.cols() != b.rows())
    throw InputError("matmul: shape mismatch");
  const size_t np = a.nodes();
  Field out(a.grid(), a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < b.cols(); ++c) {
      cplx* o = out.comp(r, c);
      for (int k = 0; k < a.cols(); ++k) {
        const cplx* x = a.comp(r, k);
        const cplx* y = b.comp(k, c);
        for (size_t i = 0; i < np; ++i) o[i] += x[i] * y[i];
      }
    }
  return out;
}

Field scale(const Field& s, const Field& f) {
  if (s.grid() != f.grid() || s.ncomp() != 1) throw InputError("scale: shape mismatch");
  Field out = f;
  const size_t np = f.nodes();
  const cplx* w = s.comp(0);
  for (int r = 0; r < f.rows(); ++r)
    for (int c = 0; c < f.cols(); ++c) {
      cplx* o = out.comp(r, c);
      for (size_t i = 0; i < np; ++i) o[i] *= w[i];
    }
  return out;
}

namespace {

using SmallMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

SmallMat node_matrix(const Field& m, size_t i) {
  SmallMat a(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) a(r, c) = m.at(i, r, c);
  return a;
}

void require_square(const Field& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() > 8)
    throw InputError(std::string(what) + ": square matrix field (m <= 8) required");
}

}  // namespace

Field inverse(const Field& m) {
  require_square(m, "inverse");
  Field out(m.grid(), m.rows(), m.cols());
  for (size_t i = 0; i < m.nodes(); ++i) {
    SmallMat a = node_matrix(m, i);
    Eigen::PartialPivLU<SmallMat> lu(a);
    if (std::abs(lu.determinant()) < 1e-300) {
      std::ostringstream os;
      os << "inverse: singular matrix at node " << i;
      throw SolverError(os.str(), 0.0);
    }
    SmallMat inv = lu.inverse();
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) out.at(i, r, c) = inv(r, c);
  }
  return out;
}

Field determinant(const Field& m) {
  require_square(m, "determinant");
  Field out(m.grid());
  for (size_t i = 0; i < m.nodes(); ++i) out.at(i) = node_matrix(m, i).determinant();
  return out;
}

double min_abs_det(const Field& m) {
  Field d = determinant(m);
  double mn = std::numeric_limits<double>::infinity();
  for (auto v : d.values()) mn = std::min(mn, std::abs(v));
  return mn;
}

Field contract(const CVec& c, const std::vector<Field>& fs) {
  if (fs.empty() || static_cast<size_t>(c.size()) != fs.size())
    throw InputError("contract: coefficient count mismatch");
  Field out(fs[0].grid(), fs[0].rows(), fs[0].cols());
  for (size_t k = 0; k < fs.size(); ++k) {
    if (!fs[k].same_shape(out)) throw InputError("contract: shape mismatch");
    const cplx ck = c[static_cast<Eigen::Index>(k)];
    if (ck == cplx(0.0)) continue;
    for (size_t i = 0; i < out.values().size(); ++i) out.values()[i] += ck * fs[k].values()[i];
  }
  return out;
}

Field adjoint(const Field& m) {
  Field out(m.grid(), m.cols(), m.rows());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      const cplx* x = m.comp(r, c);
      cplx* o = out.comp(c, r);
      for (size_t i = 0; i < m.nodes(); ++i) o[i] = std::conj(x[i]);
    }
  return out;
}

Field real_part(const Field& f) {
  Field out = f;
  for (auto& v : out.values()) v = v.real();
  return out;
}

double l2_norm(const Field& f, const Mask& mask) {
  const size_t np = f.nodes();
  if (!mask.empty() && mask.size() != np) throw InputError("l2_norm: mask size mismatch");
  double s = 0.0;
  for (int k = 0; k < f.ncomp(); ++k) {
    const cplx* x = f.values().data() + k * np;
    for (size_t i = 0; i < np; ++i)
      if (mask.empty() || mask[i]) s += std::norm(x[i]);
  }
  return std::sqrt(s * std::pow(f.grid().h(), f.grid().n));
}

double max_abs(const Field& f, const Mask& mask) {
  const size_t np = f.nodes();
  double m = 0.0;
  for (int k = 0; k < f.ncomp(); ++k) {
    const cplx* x = f.values().data() + k * np;
    for (size_t i = 0; i < np; ++i)
      if (mask.empty() || mask[i]) m = std::max(m, std::abs(x[i]));
  }
  return m;
}

Mask box_mask(const Grid& g, const Box& b) {
  if (b.dim() != g.n) throw InputError("box_mask: dimension mismatch");
  Mask m(g.size(), 0);
  const double tol = 1e-9 * g.h();
  for (size_t i = 0; i < g.size(); ++i) m[i] = b.contains(g.point(i), tol) ? 1 : 0;
  return m;
}

Mask mask_where_one(const Field& psi, double tol) {
  Mask m(psi.nodes(), 0);
  for (size_t i = 0; i < psi.nodes(); ++i) m[i] = std::abs(psi.at(i) - 1.0) <= tol ? 1 : 0;
  return m;
}

size_t mask_count(const Mask& m) {
  size_t c = 0;
  for (auto v : m) c += v ? 1 : 0;
  return c;
}

std::vector<double> trapezoid_weights(const Grid& g, const Box& b) {
  if (b.dim() != g.n) throw InputError("trapezoid: dimension mismatch");
  const double h = g.h(), tol = 1e-9 * h;
  std::vector<std::vector<double>> w1(g.n, std::vector<double>(g.N, 0.0));
  for (int a = 0; a < g.n; ++a) {
    const double jl = b.lo[a] / h, jh = b.hi[a] / h;
    if (std::abs(jl - std::round(jl)) * h > tol || std::abs(jh - std::round(jh)) * h > tol)
      throw InputError("trapezoid: box faces must lie on grid nodes");
    const int lo = static_cast<int>(std::lround(jl)), hi = static_cast<int>(std::lround(jh));
    if (lo < 0 || hi >= g.N || hi <= lo) throw InputError("trapezoid: box outside the period");
    for (int j = lo; j <= hi; ++j) w1[a][j] = (j == lo || j == hi) ? 0.5 * h : h;
  }
  std::vector<double> w(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    auto idx = g.index(i);
    double v = 1.0;
    for (int a = 0; a < g.n; ++a) v *= w1[a][idx[a]];
    w[i] = v;
  }
  return w;
}

double weighted_norm(const Field& f, double alpha, const Box& b) {
  if (alpha < 0.0) throw InputError("weighted_norm: alpha must be >= 0");
  const auto w = trapezoid_weights(f.grid(), b);
  const RVec c = b.center();
  double s = 0.0;
  for (size_t i = 0; i < f.nodes(); ++i) {
    if (w[i] == 0.0) continue;
    const double r2 = (f.grid().point(i) - c).squaredNorm();
    double a2 = 0.0;
    for (int k = 0; k < f.ncomp(); ++k) a2 += std::norm(f.values()[k * f.nodes() + i]);
    s += w[i] * a2 * std::exp(2.0 * alpha * r2);
  }
  return std::sqrt(s);
}

}  // namespace cgoforge
