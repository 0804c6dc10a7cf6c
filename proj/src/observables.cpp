#include "cqw/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cqw {

ProbabilityDist intensity(const WaveFunction& psi) {
  ProbabilityDist out{std::vector<double>(psi.size())};
  for (std::size_t j = 0; j < psi.size(); ++j) out.probs[j] = std::norm(psi.amps[static_cast<Eigen::Index>(j)]);
  return out;
}

double spread_variance(std::span<const double> p) {
  double mean = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) mean += static_cast<double>(j) * p[j];
  double var = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double d = static_cast<double>(j) - mean;
    var += d * d * p[j];
  }
  return var;
}

double participation_ratio(std::span<const double> p) {
  double sum_sq = 0.0;
  for (const double x : p) sum_sq += x * x;
  if (!(sum_sq > 0.0)) throw std::invalid_argument("participation ratio of an all-zero distribution");
  return 1.0 / sum_sq;
}

LocalizationFit fit_localization_length(std::span<const double> p, const SiteWindow& window) {
  if (window.center >= p.size()) throw std::invalid_argument("localization window center outside the lattice");
  if (window.min_distance > window.max_distance) throw std::invalid_argument("localization window is inverted");

  std::vector<double> xs;
  std::vector<double> ys;
  auto add = [&](std::size_t site, std::size_t distance) {
    xs.push_back(static_cast<double>(distance));
    ys.push_back(std::log(std::max(p[site], 1e-300)));
  };
  for (std::size_t d = window.min_distance; d <= window.max_distance; ++d) {
    if (d <= window.center) add(window.center - d, d);
    if (d > 0 && window.center + d < p.size()) add(window.center + d, d);
  }
  if (xs.size() < 4) throw std::invalid_argument("localization window has fewer than 4 sites");

  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("localization window spans a single distance");

  LocalizationFit fit{};
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.window = window;
  fit.n_points = xs.size();
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  // Relative scale guards against rounding noise on a flat profile.
  const double flat_scale = 1e-24 * std::max(1.0, my * my) * n;
  fit.r_squared = syy > flat_scale ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 0.0;
  if (syy <= flat_scale) fit.slope = 0.0;
  if (fit.slope < 0.0) fit.xi = -1.0 / fit.slope;
  return fit;
}

double total_variation_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total variation distance needs equal lengths");
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) sum += std::abs(p[j] - q[j]);
  return 0.5 * sum;
}

double shifted_total_variation_distance(std::span<const double> p, std::span<const double> q, long shift) {
  if (p.size() != q.size()) throw std::invalid_argument("total variation distance needs equal lengths");
  const auto n = static_cast<long>(p.size());
  double sum = 0.0;
  for (long j = 0; j < n; ++j) {
    const long src = j - shift;
    const double moved = (src >= 0 && src < n) ? p[static_cast<std::size_t>(src)] : 0.0;
    sum += std::abs(moved - q[static_cast<std::size_t>(j)]);
  }
  // Mass of p translated off the lattice.
  for (long src = 0; src < n; ++src) {
    const long dst = src + shift;
    if (dst < 0 || dst >= n) sum += p[static_cast<std::size_t>(src)];
  }
  return 0.5 * sum;
}

}  // namespace cqw
