#pragma once

#include <vector>

#include "cgoforge/field.hpp"

namespace cgoforge {

// Unitary DFT of every component (FFTW, deterministic estimate plans).
Field fft(const Field& f);
Field ifft(const Field& f);

// Dual-lattice frequencies (2 pi / L) k along one axis, symmetric ordering
// k = 0, 1, ..., N/2 - 1, -N/2, ..., -1.
std::vector<double> axis_frequencies(const Grid& g);
// theta . xi at every frequency node.
std::vector<cplx> theta_dot_xi(const Grid& g, const CVec& theta);

// Multiply every component's spectrum by sym (length grid.size()).
Field apply_symbol(const Field& f, const std::vector<cplx>& sym);

Field directional_derivative(const Field& f, const CVec& theta);
Field partial(const Field& f, int axis);
std::vector<Field> gradient(const Field& scalar);
Field laplacian(const Field& f);

// Singular set |theta . xi| <= eps_sing = 1e-8 * 2 pi / L.
double singular_threshold(const Grid& g);

struct Antiderivative {
  Field value;
  size_t zeroed_modes = 0;
  double removed_energy_fraction = 0.0;
};

// Inverse of theta . d on the nonsingular modes; singular modes are zeroed.
Antiderivative antiderivative(const Field& f, const CVec& theta);

// Projection onto the singular modes (for theta in a coordinate plane this is
// the mean over the two in-plane axes, per slice of the remaining axes).
Field singular_projection(const Field& f, const CVec& theta);

}  // namespace cgoforge
