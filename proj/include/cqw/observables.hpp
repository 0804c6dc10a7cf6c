#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "cqw/lattice.hpp"
#include "cqw/oracles.hpp"

namespace cqw {

/// probs_j = |psi_j|^2.
ProbabilityDist intensity(const WaveFunction& psi);

/// Second central moment of the site index.
double spread_variance(std::span<const double> p);

/// 1 / sum p_j^2.
double participation_ratio(std::span<const double> p);

/// Sites with center - max_distance <= j <= center + max_distance whose
/// distance |j - center| is at least min_distance. Sites outside the lattice
/// are skipped.
struct SiteWindow {
  std::size_t center;
  std::size_t min_distance = 10;
  std::size_t max_distance = 30;
};

struct LocalizationFit {
  std::optional<double> xi;  // -1/slope, only when the tail decays
  double slope;
  double intercept;
  double r_squared;  // 0 when the data carry no variance to explain
  SiteWindow window;
  std::size_t n_points;
};

/// Least-squares fit of ln p_j against |j - center| over the window.
/// Values below 1e-300 are floored there before taking the log. Fewer than
/// 4 usable points is rejected with std::invalid_argument.
LocalizationFit fit_localization_length(std::span<const double> p, const SiteWindow& window);

/// (1/2) sum |p_j - q_j|.
double total_variation_distance(std::span<const double> p, std::span<const double> q);

/// TV distance between q and p translated by `shift` sites (p_j -> p_{j-shift}).
/// Sites that either distribution pushes across an edge are compared with 0.
double shifted_total_variation_distance(std::span<const double> p, std::span<const double> q, long shift);

}  // namespace cqw
