#pragma once

#include <vector>

#include "cgoforge/field.hpp"

namespace cgoforge {

// First-order form -Delta u - 2i sum_k A_k d_k u + B u = 0 with m x m fields.
struct Potential {
  std::vector<Field> A;  // one per axis
  Field B;
  int m = 1;

  const Grid& grid() const { return B.grid(); }
  void validate() const;
};

Potential zero_potential(const Grid& g, int m);

// m = 2: A_k = amp * exp(-|x-c|^2/sigma^2) * M_k for fixed Hermitian non-commuting
// M_k; B = amp_b * bump * [[1, .3], [.3, .5]].
Potential gaussian_yang_mills(const Grid& g, const RVec& center, double sigma, double amp,
                              double amp_b);

// A_k = a_k(x) I for scalar fields a_k (commuting case).
Potential scalar_potential(const std::vector<Field>& a, int m);

// Schroedinger form dictionary: V = B - sum A_k^2 + i sum d_k A_k (spectral d_k).
Field v_from_b(const Potential& p);
Field b_from_v(const std::vector<Field>& A, const Field& V);

}  // namespace cgoforge
