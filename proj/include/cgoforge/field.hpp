#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "cgoforge/frames.hpp"

namespace cgoforge {

// Periodic box [0,L)^n with N nodes per axis, x_j = j L / N.
struct Grid {
  int n = 3;
  int N = 32;
  double L = 4.0;

  Grid() = default;
  Grid(int dim, int points, double period);

  size_t size() const;
  double h() const { return L / N; }
  double coord(int j) const { return j * L / N; }
  // Per-axis indices of a node (row-major, axis 0 slowest); unused axes are 0.
  std::array<int, 3> index(size_t node) const;
  size_t node(const std::array<int, 3>& idx) const;
  RVec point(size_t node) const;
  bool operator==(const Grid& o) const { return n == o.n && N == o.N && L == o.L; }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

// Axis-aligned box.
struct Box {
  RVec lo, hi;
  RVec center() const { return 0.5 * (lo + hi); }
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const RVec& x, double tol = 0.0) const;
};

Box cube(int n, double lo, double hi);

using Mask = std::vector<unsigned char>;

// Complex samples of an rows x cols matrix per node. Component (r,c) occupies a
// contiguous block of grid.size() values; scalars are 1x1, vectors d x 1.
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& g, int rows = 1, int cols = 1, cplx fill = 0.0);

  const Grid& grid() const { return grid_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int ncomp() const { return rows_ * cols_; }
  size_t nodes() const { return grid_.size(); }
  bool same_shape(const Field& o) const {
    return grid_ == o.grid_ && rows_ == o.rows_ && cols_ == o.cols_;
  }

  cplx* comp(int r, int c = 0) { return values_.data() + block(r, c); }
  const cplx* comp(int r, int c = 0) const { return values_.data() + block(r, c); }
  cplx& at(size_t node, int r = 0, int c = 0) { return values_[block(r, c) + node]; }
  cplx at(size_t node, int r = 0, int c = 0) const { return values_[block(r, c) + node]; }

  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }

  // Extract component (r,c) as a scalar field, or column c as a vector field.
  Field component(int r, int c = 0) const;
  Field column(int c) const;
  void set_component(int r, int c, const Field& s);
  void set_column(int c, const Field& v);

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx s);
  Field conj() const;
  bool all_finite() const;

 private:
  size_t block(int r, int c) const {
    return (static_cast<size_t>(r) * cols_ + c) * grid_.size();
  }
  Grid grid_;
  int rows_ = 0, cols_ = 0;
  std::vector<cplx> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx s, Field a);
Field operator-(Field a);

Field sample(const Grid& g, const std::function<cplx(const RVec&)>& f);
Field identity_field(const Grid& g, int m);
// Nodewise matrix product (r x k)(k x c).
Field matmul(const Field& a, const Field& b);
// Nodewise s * F for a scalar field s.
Field scale(const Field& s, const Field& f);
// Nodewise inverse of a square matrix field; throws on singular nodes.
Field inverse(const Field& m);
Field determinant(const Field& m);
double min_abs_det(const Field& m);
// Sum_k c_k F_k for complex coefficients (e.g. theta . A).
Field contract(const CVec& c, const std::vector<Field>& fs);
// Nodewise conjugate transpose.
Field adjoint(const Field& m);
Field real_part(const Field& f);

// L^2 norm with cell weight h^n, over a mask (all nodes if empty).
double l2_norm(const Field& f, const Mask& mask = {});
double max_abs(const Field& f, const Mask& mask = {});

Mask box_mask(const Grid& g, const Box& b);
Mask mask_where_one(const Field& psi, double tol = 1e-14);
size_t mask_count(const Mask& m);

// Tensor trapezoid weights over a node-aligned box (zero outside).
std::vector<double> trapezoid_weights(const Grid& g, const Box& b);
// Trapezoidal quadrature of |f|^2 exp(2 alpha |x - c|^2) over the box, c its center.
double weighted_norm(const Field& f, double alpha, const Box& b);

}  // namespace cgoforge
