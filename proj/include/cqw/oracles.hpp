#pragma once

#include <cstddef>
#include <vector>

#include "cqw/lattice.hpp"

namespace cqw {

/// Nonnegative weights over sites summing to one.
struct ProbabilityDist {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  double total() const;
};

/// Infinite uniform chain (coupling c, zero on-site terms) started on site
/// j0: psi_j(z) = (-i)^|j-j0| J_|j-j0|(2 c z), cut to sites [0, n_sites).
///
/// The result is not renormalized. Throws NumericalError when the intensity
/// that falls outside the window exceeds 1e-12.
WaveFunction bessel_free_state(std::size_t j0, double c, double z, std::size_t n_sites);

/// Semi-infinite chain occupying sites 0, 1, ... with no waveguide left of
/// site 0, started on site j0. Method of images: the free solution from j0
/// minus the free solution from the mirror source at -j0-2, which makes the
/// amplitude vanish on the missing site -1 for all z.
///
/// Only the right edge of the window truncates; the same 1e-12 tail bound
/// applies.
WaveFunction image_boundary_state(std::size_t j0, double c, double z, std::size_t n_sites);

/// Classical continuous-time random walk dp_j/dt = gamma (p_{j+1} + p_{j-1} - 2 p_j)
/// on the infinite chain, started on j0: p_j(t) = exp(-2 gamma t) I_|j-j0|(2 gamma t).
/// Throws NumericalError when more than 1e-10 of the mass lies outside the window.
ProbabilityDist classical_ctrw_distribution(std::size_t j0, double gamma, double t, std::size_t n_sites);

/// Spread of the free walk: sum_n n^2 J_n(2 c z)^2 = 2 c^2 z^2.
double cqw_variance_law(double c, double z);

}  // namespace cqw
