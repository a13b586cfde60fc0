#include "cgoforge/box_fd.hpp"

#include <cmath>

#include "cgoforge/error.hpp"

namespace cgoforge {

namespace {

int node_index(double x, const Grid& g, const char* what) {
  const double t = x / g.h();
  const long j = std::lround(t);
  if (std::abs(t - j) > 1e-9) throw InputError(std::string("box domain: ") + what + " is not on a grid node");
  return static_cast<int>(j);
}

}  // namespace

BoxDomain BoxDomain::make(const Grid& g, const Box& b, bool edges) {
  if (b.dim() != g.n) throw InputError("box domain: dimension differs from grid");
  BoxDomain d;
  d.grid = g;
  d.box = b;
  d.h = g.h();
  for (int a = 0; a < g.n; ++a) {
    const int lo = node_index(b.lo[a], g, "lower face");
    const int hi = node_index(b.hi[a], g, "upper face");
    if (lo < 0 || hi > g.N - 1) throw InputError("box domain: box leaves the periodic cell");
    if (hi - lo < 4) throw InputError("box domain: need at least 4 cells per axis");
    d.origin[a] = lo;
    d.cells[a] = hi - lo;
  }
  size_t total = 1;
  for (int a = 0; a < g.n; ++a) total *= static_cast<size_t>(d.cells[a] + 1);
  d.roles_.assign(total, -1);

  auto visit = [&](auto&& fn) {
    std::array<int, 3> li{0, 0, 0};
    const int c0 = d.cells[0], c1 = g.n > 1 ? d.cells[1] : 0, c2 = g.n > 2 ? d.cells[2] : 0;
    for (li[0] = 0; li[0] <= c0; ++li[0])
      for (li[1] = 0; li[1] <= c1; ++li[1])
        for (li[2] = 0; li[2] <= c2; ++li[2]) fn(li);
  };
  visit([&](const std::array<int, 3>& li) {
    bool inside = true;
    for (int a = 0; a < g.n; ++a) inside = inside && li[a] > 0 && li[a] < d.cells[a];
    if (inside) {
      d.roles_[d.linear(li)] = static_cast<int>(d.interior.size());
      d.interior.push_back(d.grid_node(li));
      d.interior_local.push_back(li);
    }
  });
  for (int a = 0; a < g.n; ++a)
    for (int side = 0; side < 2; ++side)
      visit([&](const std::array<int, 3>& li) {
        if (li[a] != (side ? d.cells[a] : 0)) return;
        for (int o = 0; o < g.n; ++o)
          if (o != a && (li[o] == 0 || li[o] == d.cells[o])) return;
        d.roles_[d.linear(li)] = -2 - static_cast<int>(d.boundary.size());
        d.boundary.push_back(d.grid_node(li));
        d.boundary_local.push_back(li);
        d.face.push_back(2 * a + side);
      });
  d.face_nodes = d.boundary.size();
  if (edges)
    visit([&](const std::array<int, 3>& li) {
      int on = 0;
      for (int a = 0; a < g.n; ++a) on += li[a] == 0 || li[a] == d.cells[a];
      if (on != 2) return;
      d.roles_[d.linear(li)] = -2 - static_cast<int>(d.boundary.size());
      d.boundary.push_back(d.grid_node(li));
      d.boundary_local.push_back(li);
      d.face.push_back(-1);
    });
  return d;
}

size_t BoxDomain::linear(const std::array<int, 3>& li) const {
  size_t s = 0;
  for (int a = 0; a < grid.n; ++a) s = s * (cells[a] + 1) + li[a];
  return s;
}

int BoxDomain::role(const std::array<int, 3>& li) const {
  for (int a = 0; a < grid.n; ++a)
    if (li[a] < 0 || li[a] > cells[a]) return -1;
  return roles_[linear(li)];
}

size_t BoxDomain::grid_node(const std::array<int, 3>& li) const {
  std::array<int, 3> gi{0, 0, 0};
  for (int a = 0; a < grid.n; ++a) gi[a] = origin[a] + li[a];
  return grid.node(gi);
}

RVec BoxDomain::point(const std::array<int, 3>& li) const { return grid.point(grid_node(li)); }

RVec BoxDomain::normal(size_t b) const {
  if (face[b] < 0) throw InputError("box domain: edge nodes have no normal");
  RVec n = RVec::Zero(grid.n);
  n[face[b] / 2] = face[b] % 2 ? 1.0 : -1.0;
  return n;
}

CArray boundary_samples(const BoxDomain& dom, int m, const std::function<CVec(const RVec&)>& f) {
  CArray out(dom.boundary_count() * m);
  for (size_t b = 0; b < dom.boundary_count(); ++b) {
    CVec v = f(dom.grid.point(dom.boundary[b]));
    if (v.size() != m) throw InputError("boundary data: wrong number of components");
    for (int r = 0; r < m; ++r) out[b * m + r] = v[r];
  }
  return out;
}

Field inject(const Field& f, const Grid& coarse) {
  const Grid& g = f.grid();
  if (g.n != coarse.n || g.L != coarse.L || g.N % coarse.N != 0)
    throw InputError("inject: fine grid must refine the coarse grid by an integer factor");
  const int k = g.N / coarse.N;
  Field out(coarse, f.rows(), f.cols());
  for (size_t i = 0; i < coarse.size(); ++i) {
    auto idx = coarse.index(i);
    for (int a = 0; a < g.n; ++a) idx[a] *= k;
    const size_t j = g.node(idx);
    for (int r = 0; r < f.rows(); ++r)
      for (int c = 0; c < f.cols(); ++c) out.at(i, r, c) = f.at(j, r, c);
  }
  return out;
}

}  // namespace cgoforge
