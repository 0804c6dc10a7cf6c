#pragma once

// Shared helpers for the test suites. Everything here is deliberately
// independent of the library's numerical paths: dense linear algebra,
// Boost special functions, brute-force sums.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>

#include "cqw/lattice.hpp"

namespace cqw::testing {

inline double max_abs_diff(const Amplitudes& a, const Amplitudes& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// J_n(x) from Boost.Math.
inline double boost_j(int n, double x) { return boost::math::cyl_bessel_j(n, x); }

/// exp(-i H z) psi through a dense complex eigen-decomposition of the
/// explicitly assembled matrix (no tridiagonal shortcuts).
inline Amplitudes dense_evolve(const Eigen::MatrixXd& h, const Amplitudes& psi, double z) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.cast<std::complex<double>>());
  const auto& v = solver.eigenvectors();
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) phases[k] = std::polar(1.0, -solver.eigenvalues()[k] * z);
  return v * phases.asDiagonal() * (v.adjoint() * psi);
}

inline Amplitudes random_state(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Amplitudes psi(static_cast<Eigen::Index>(n));
  for (auto& a : psi) a = {normal(gen), normal(gen)};
  return psi / psi.norm();
}

/// Random lattice: N in [n_min, n_max], couplings in [0.5, 1.5],
/// on-site terms in [-1, 1], open or periodic.
inline LatticeSpec random_lattice(std::mt19937_64& gen, std::size_t n_min, std::size_t n_max) {
  std::uniform_int_distribution<std::size_t> size(n_min, n_max);
  std::uniform_real_distribution<double> c(0.5, 1.5), b(-1.0, 1.0);
  LatticeSpec spec;
  spec.n_sites = size(gen);
  spec.boundary = (spec.n_sites >= 3 && gen() % 2 == 0) ? Boundary::Periodic : Boundary::Open;
  spec.coupling.resize(spec.expected_coupling_count());
  for (auto& x : spec.coupling) x = c(gen);
  spec.beta.resize(spec.n_sites);
  for (auto& x : spec.beta) x = b(gen);
  return spec;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

}  // namespace cqw::testing
