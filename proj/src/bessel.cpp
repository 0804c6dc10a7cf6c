#include "cqw/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqw::bessel {

namespace {

constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleFactor = 1e-250;

// Starting order for the downward sweep. Starting well above both the
// requested order and the turning point x keeps the relative error of the
// normalized result at machine precision.
std::size_t miller_start(double x, std::size_t max_order) {
  const double top = std::max(static_cast<double>(max_order), x);
  auto start = static_cast<std::size_t>(top + 30.0 + std::sqrt(60.0 * (top + 1.0)));
  return start + (start % 2);
}

std::vector<double> j_series(double x, std::size_t max_order) {
  std::vector<double> out(max_order + 1, 0.0);
  const double half = 0.5 * x;
  const double q = -half * half;
  for (std::size_t n = 0; n <= max_order; ++n) {
    const double log_lead = static_cast<double>(n) * std::log(half) - std::lgamma(static_cast<double>(n) + 1.0);
    if (log_lead < -745.0) break;  // underflow; remaining orders are smaller still
    double term = std::exp(log_lead);
    double sum = term;
    for (int m = 1; m < 60; ++m) {
      term *= q / (static_cast<double>(m) * static_cast<double>(m + static_cast<int>(n)));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    out[n] = sum;
  }
  return out;
}

}  // namespace

std::vector<double> j_sequence(double x, std::size_t max_order) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("bessel J needs finite x >= 0");
  if (x == 0.0) {
    std::vector<double> out(max_order + 1, 0.0);
    out[0] = 1.0;
    return out;
  }
  if (x < 0.1) return j_series(x, max_order);

  const std::size_t start = miller_start(x, max_order);
  std::vector<double> work(start + 2, 0.0);
  work[start] = 1e-300;
  double norm = 0.0;  // J_0 + 2 sum J_2k, accumulated in the same scale
  for (std::size_t k = start; k >= 1; --k) {
    work[k - 1] = (2.0 * static_cast<double>(k) / x) * work[k] - work[k + 1];
    if (std::abs(work[k - 1]) > kRescaleAbove) {
      for (std::size_t i = k - 1; i <= start; ++i) work[i] *= kRescaleFactor;
      norm *= kRescaleFactor;
    }
    if (k % 2 == 0) norm += 2.0 * work[k];
  }
  norm += work[0];
  std::vector<double> out(max_order + 1);
  for (std::size_t n = 0; n <= max_order; ++n) out[n] = work[n] / norm;
  return out;
}

std::vector<double> scaled_i_sequence(double x, std::size_t max_order) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("bessel I needs finite x >= 0");
  if (x == 0.0) {
    std::vector<double> out(max_order + 1, 0.0);
    out[0] = 1.0;
    return out;
  }
  const std::size_t start = miller_start(x, max_order);
  std::vector<double> work(start + 2, 0.0);
  work[start] = 1e-300;
  double norm = 0.0;
  for (std::size_t k = start; k >= 1; --k) {
    work[k - 1] = (2.0 * static_cast<double>(k) / x) * work[k] + work[k + 1];
    if (work[k - 1] > kRescaleAbove) {
      for (std::size_t i = k - 1; i <= start; ++i) work[i] *= kRescaleFactor;
      norm *= kRescaleFactor;
    }
    norm += 2.0 * work[k];
  }
  norm += work[0];
  std::vector<double> out(max_order + 1);
  for (std::size_t n = 0; n <= max_order; ++n) out[n] = work[n] / norm;
  return out;
}

std::size_t j_cutoff_order(double x, double threshold) {
  auto order = static_cast<std::size_t>(std::ceil(x)) + 1;
  std::size_t span = 32;
  for (;;) {
    const auto seq = j_sequence(x, order + span);
    for (std::size_t n = order; n < seq.size(); ++n) {
      if (std::abs(seq[n]) < threshold) return n;
    }
    order += span;
    span *= 2;
  }
}

}  // namespace cqw::bessel
