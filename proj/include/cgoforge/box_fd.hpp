#pragma once

#include <array>
#include <vector>

#include "cgoforge/field.hpp"
#include "cgoforge/krylov.hpp"

namespace cgoforge {

// Node-aligned box inside a periodic grid. Unknowns live on interior nodes;
// boundary data on face nodes (edges and corners never enter the 7-point stencils).
// Boundary order: faces -x0, +x0, -x1, +x1, ...; lexicographic within a face.
// With `edges`, nodes with exactly two boundary coordinates follow (face = -1);
// mixed-derivative stencils reach them.
struct BoxDomain {
  Grid grid;
  Box box;
  std::array<int, 3> origin{0, 0, 0};  // grid index of box.lo
  std::array<int, 3> cells{0, 0, 0};   // cells per axis
  double h = 0.0;
  std::vector<size_t> interior;        // grid nodes
  std::vector<size_t> boundary;        // grid nodes
  std::vector<int> face;               // 2 * axis + (outward side > 0), -1 on edges
  std::vector<std::array<int, 3>> interior_local, boundary_local;

  static BoxDomain make(const Grid& g, const Box& b, bool edges = false);
  int dim() const { return grid.n; }
  // Role of a box-local index: interior id >= 0, boundary id b as -2 - b, -1 otherwise.
  int role(const std::array<int, 3>& li) const;
  size_t grid_node(const std::array<int, 3>& li) const;
  RVec point(const std::array<int, 3>& li) const;
  RVec normal(size_t b) const;
  size_t boundary_count() const { return boundary.size(); }
  size_t face_count() const { return face_nodes; }
  size_t face_nodes = 0;
  size_t interior_count() const { return interior.size(); }

 private:
  std::vector<int> roles_;
  size_t linear(const std::array<int, 3>& li) const;
};

// Sample per boundary node and component; layout index = b * m + r.
CArray boundary_samples(const BoxDomain& dom, int m, const std::function<CVec(const RVec&)>& f);
// Node injection of a periodic field onto a coarser grid with N_fine = k N_coarse.
Field inject(const Field& f, const Grid& coarse);

}  // namespace cgoforge
