#include "cqw/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cqw/bessel.hpp"

namespace cqw {

namespace {

constexpr double kAmplitudeTail = 1e-12;
constexpr double kClassicalTail = 1e-10;

void check_args(double rate, double time, const char* what) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument(std::string(what) + ": rate must be > 0");
  if (!(time >= 0.0) || !std::isfinite(time)) throw std::invalid_argument(std::string(what) + ": time must be >= 0");
}

Complex minus_i_power(std::size_t n) {
  static constexpr Complex kPhase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return kPhase[n % 4];
}

// Sum of squares of seq[first..], where seq covers every order that does
// not underflow.
double tail_mass(const std::vector<double>& seq, std::size_t first, bool squared) {
  double sum = 0.0;
  for (std::size_t n = seq.size(); n-- > first;) sum += squared ? seq[n] * seq[n] : seq[n];
  return sum;
}

// Bessel J values far enough out that everything beyond is below 1e-30.
std::vector<double> free_amplitudes(double x, std::size_t needed) {
  const std::size_t top = std::max(needed, bessel::j_cutoff_order(x, 1e-30));
  return bessel::j_sequence(x, top);
}

void check_window(std::size_t j0, std::size_t n_sites, const char* what) {
  if (n_sites == 0 || j0 >= n_sites) {
    throw std::invalid_argument(std::string(what) + ": source site " + std::to_string(j0) + " outside window of " +
                                std::to_string(n_sites) + " sites");
  }
}

}  // namespace

double ProbabilityDist::total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

WaveFunction bessel_free_state(std::size_t j0, double c, double z, std::size_t n_sites) {
  check_args(c, z, "bessel_free_state");
  check_window(j0, n_sites, "bessel_free_state");
  const auto j = free_amplitudes(2.0 * c * z, n_sites);
  // Orders beyond the left edge (> j0) and beyond the right edge (> n-1-j0).
  const double outside = tail_mass(j, j0 + 1, true) + tail_mass(j, n_sites - j0, true);
  if (outside > kAmplitudeTail) {
    throw NumericalError("bessel_free_state: window too small, " + std::to_string(outside) +
                         " of the intensity falls outside " + std::to_string(n_sites) + " sites");
  }
  WaveFunction psi{Amplitudes(static_cast<Eigen::Index>(n_sites))};
  for (std::size_t site = 0; site < n_sites; ++site) {
    const std::size_t d = site > j0 ? site - j0 : j0 - site;
    psi.amps[static_cast<Eigen::Index>(site)] = minus_i_power(d) * j[d];
  }
  return psi;
}

WaveFunction image_boundary_state(std::size_t j0, double c, double z, std::size_t n_sites) {
  check_args(c, z, "image_boundary_state");
  check_window(j0, n_sites, "image_boundary_state");
  // The mirror source at -j0-2 is farther from every window site than j0,
  // so the real source dominates the right-edge tail.
  const auto j = free_amplitudes(2.0 * c * z, n_sites + j0 + 2);
  const double outside = tail_mass(j, n_sites - j0, true);
  if (outside > kAmplitudeTail) {
    throw NumericalError("image_boundary_state: window too small, " + std::to_string(outside) +
                         " of the intensity falls outside " + std::to_string(n_sites) + " sites");
  }
  WaveFunction psi{Amplitudes(static_cast<Eigen::Index>(n_sites))};
  for (std::size_t site = 0; site < n_sites; ++site) {
    const std::size_t direct = site > j0 ? site - j0 : j0 - site;
    const std::size_t mirrored = site + j0 + 2;
    psi.amps[static_cast<Eigen::Index>(site)] =
        minus_i_power(direct) * j[direct] - minus_i_power(mirrored) * j[mirrored];
  }
  return psi;
}

ProbabilityDist classical_ctrw_distribution(std::size_t j0, double gamma, double t, std::size_t n_sites) {
  check_args(gamma, t, "classical_ctrw_distribution");
  check_window(j0, n_sites, "classical_ctrw_distribution");
  const double x = 2.0 * gamma * t;
  // exp(-x) I_n(x) decays faster than J_n(x) beyond n ~ x only for large n;
  // extend until the terms are negligible.
  std::size_t top = std::max<std::size_t>(n_sites, static_cast<std::size_t>(x + 10.0 * std::sqrt(x + 1.0) + 40.0));
  auto p = bessel::scaled_i_sequence(x, top);
  while (p.back() > 1e-30) {
    top *= 2;
    p = bessel::scaled_i_sequence(x, top);
  }
  const double outside = tail_mass(p, j0 + 1, false) + tail_mass(p, n_sites - j0, false);
  if (outside > kClassicalTail) {
    throw NumericalError("classical_ctrw_distribution: window too small, mass " + std::to_string(outside) +
                         " lies outside " + std::to_string(n_sites) + " sites");
  }
  ProbabilityDist dist{std::vector<double>(n_sites)};
  for (std::size_t site = 0; site < n_sites; ++site) {
    const std::size_t d = site > j0 ? site - j0 : j0 - site;
    dist.probs[site] = p[d];
  }
  return dist;
}

double cqw_variance_law(double c, double z) {
  check_args(c, z, "cqw_variance_law");
  return 2.0 * c * c * z * z;
}

}  // namespace cqw
