#include "cqw/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

#include "cqw/bessel.hpp"

namespace cqw {

namespace {

void check_dims(const Hamiltonian& h, const WaveFunction& psi) {
  if (psi.size() != h.size()) {
    throw std::invalid_argument("dimension mismatch: operator is " + std::to_string(h.size()) + ", state is " +
                                std::to_string(psi.size()));
  }
}

std::span<Complex> as_span(Amplitudes& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const Complex> as_span(const Amplitudes& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

ZGrid::ZGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("z grid is empty");
  if (!(values_[0] >= 0.0)) throw std::invalid_argument("z grid must start at z >= 0");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw std::invalid_argument("z grid contains a non-finite value");
    if (i > 0 && !(values_[i] > values_[i - 1])) throw std::invalid_argument("z grid must be strictly increasing");
  }
}

ZGrid ZGrid::linspace(double start, double stop, std::size_t steps) {
  if (steps == 0) return ZGrid({start});
  std::vector<double> v(steps + 1);
  const double h = (stop - start) / static_cast<double>(steps);
  for (std::size_t i = 0; i <= steps; ++i) v[i] = start + h * static_cast<double>(i);
  v.back() = stop;
  return ZGrid(std::move(v));
}

ZGrid ZGrid::geomspace(double start, double stop, std::size_t points) {
  if (!(start > 0.0) || points < 2) throw std::invalid_argument("geomspace needs start > 0 and >= 2 points");
  std::vector<double> v(points);
  const double ratio = std::log(stop / start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) v[i] = start * std::exp(ratio * static_cast<double>(i));
  v.front() = start;
  v.back() = stop;
  return ZGrid(std::move(v));
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Eigen: return "eigen";
    case Method::Chebyshev: return "chebyshev";
    case Method::Ode: return "ode";
  }
  return "?";
}

SpectralDecomposition decompose(const Hamiltonian& h) {
  const auto n = static_cast<Eigen::Index>(h.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (h.periodic()) {
    solver.compute(h.dense());
  } else {
    const Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(h.diag().data(), n);
    const Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(h.offdiag().data(), n - 1);
    solver.computeFromTridiagonal(diag, sub);
  }
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Snapshots evolve_eigen(const SpectralDecomposition& spectrum, const WaveFunction& psi0, const ZGrid& zgrid) {
  const auto& vecs = spectrum.eigenvectors;
  if (static_cast<std::size_t>(vecs.rows()) != psi0.size()) {
    throw std::invalid_argument("dimension mismatch between spectrum and state");
  }
  const Amplitudes coeffs = vecs.transpose() * psi0.amps;
  Snapshots out{zgrid, {}, Method::Eigen};
  out.states.reserve(zgrid.size());
  for (const double z : zgrid.values()) {
    if (z == 0.0) {
      out.states.push_back(psi0);
      continue;
    }
    Amplitudes rotated(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
      rotated[k] = coeffs[k] * std::polar(1.0, -spectrum.eigenvalues[k] * z);
    }
    out.states.push_back({vecs * rotated});
  }
  return out;
}

Snapshots evolve_eigen(const Hamiltonian& h, const WaveFunction& psi0, const ZGrid& zgrid) {
  check_dims(h, psi0);
  return evolve_eigen(decompose(h), psi0, zgrid);
}

SpectralBounds spectral_bounds(const Hamiltonian& h) {
  const std::size_t n = h.size();
  const auto& d = h.diag();
  const auto& c = h.offdiag();
  double lower = std::numeric_limits<double>::infinity();
  double upper = -lower;
  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double radius = 0.0;
    if (j > 0) radius += std::abs(c[j - 1]);
    if (j + 1 < n) radius += std::abs(c[j]);
    if (h.periodic() && (j == 0 || j == n - 1)) radius += std::abs(c[n - 1]);
    lower = std::min(lower, d[j] - radius);
    upper = std::max(upper, d[j] + radius);
    scale = std::max(scale, std::abs(d[j]) + radius);
  }
  const double pad = 8.0 * std::numeric_limits<double>::epsilon() * scale;
  return {lower - pad, upper + pad};
}

ChebyshevPropagator::ChebyshevPropagator(const Hamiltonian& h, double tol)
    : ChebyshevPropagator(h, spectral_bounds(h), tol) {}

ChebyshevPropagator::ChebyshevPropagator(const Hamiltonian& h, SpectralBounds bounds, double tol)
    : h_(h), center_(0.5 * (bounds.upper + bounds.lower)), half_width_(0.5 * (bounds.upper - bounds.lower)),
      tol_(tol) {
  if (!(tol > 0.0 && tol <= 1e-4)) throw std::invalid_argument("chebyshev tol must lie in (0, 1e-4]");
  if (!(half_width_ > 0.0)) throw std::invalid_argument("chebyshev needs a nondegenerate spectral interval");
}

std::size_t ChebyshevPropagator::order_for(double z) const {
  const double x = half_width_ * z;
  std::size_t limit = static_cast<std::size_t>(x + 10.0 * std::cbrt(x + 1.0) + 40.0);
  for (;;) {
    if (limit > kMaxOrder) {
      throw NumericalError("chebyshev expansion needs more than " + std::to_string(kMaxOrder) +
                           " terms; check the spectral bounds or split z");
    }
    const auto j = bessel::j_sequence(x, limit);
    std::size_t run = 0;
    for (std::size_t k = 0; k <= limit; ++k) {
      const double coeff = (k == 0 ? 1.0 : 2.0) * std::abs(j[k]);
      run = coeff < tol_ ? run + 1 : 0;
      if (run == 3) return k;
    }
    limit *= 2;
  }
}

Amplitudes ChebyshevPropagator::propagate(const Amplitudes& psi, double z) const {
  const Hamiltonian& h = h_;
  if (static_cast<std::size_t>(psi.size()) != h.size()) {
    throw std::invalid_argument("dimension mismatch in chebyshev propagation");
  }
  if (z == 0.0) return psi;

  const std::size_t order = order_for(z);
  const auto j = bessel::j_sequence(half_width_ * z, order);
  const double inv_a = 1.0 / half_width_;
  const auto n = psi.size();

  // Scaled operator: (H - center) / half_width.
  auto apply_scaled = [&](const Amplitudes& in, Amplitudes& out) {
    h.apply(as_span(in), as_span(out));
    out = (out - center_ * in) * inv_a;
  };

  // (-i)^k cycles through 1, -i, -1, i.
  static constexpr Complex kPhase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};

  Amplitudes prev = psi;
  Amplitudes curr(n);
  Amplitudes next(n);
  apply_scaled(prev, curr);
  Amplitudes acc = j[0] * prev + (2.0 * j[1]) * kPhase[1] * curr;
  for (std::size_t k = 2; k <= order; ++k) {
    apply_scaled(curr, next);
    next = 2.0 * next - prev;
    acc += (2.0 * j[k]) * kPhase[k % 4] * next;
    std::swap(prev, curr);
    std::swap(curr, next);
  }
  return acc * std::polar(1.0, -center_ * z);
}

Snapshots evolve_chebyshev(const Hamiltonian& h, const WaveFunction& psi0, const ZGrid& zgrid, double tol) {
  check_dims(h, psi0);
  const ChebyshevPropagator prop(h, tol);
  Snapshots out{zgrid, {}, Method::Chebyshev};
  out.states.reserve(zgrid.size());
  for (const double z : zgrid.values()) out.states.push_back({prop.propagate(psi0.amps, z)});
  return out;
}

WaveFunction evolve_ode_oracle(const Hamiltonian& h, const WaveFunction& psi0, double z, double dz_max) {
  check_dims(h, psi0);
  if (!(z >= 0.0)) throw std::invalid_argument("ode oracle needs z >= 0");
  const auto b = spectral_bounds(h);
  const double radius = std::max(std::abs(b.lower), std::abs(b.upper));
  if (!(dz_max > 0.0) || dz_max * radius >= 1.0) {
    throw std::invalid_argument("ode oracle step too large: dz_max * spectral radius must be < 1");
  }
  if (z == 0.0) return psi0;

  const auto steps = static_cast<std::size_t>(std::ceil(z / dz_max));
  const double dz = z / static_cast<double>(steps);
  const auto n = psi0.amps.size();
  const Complex minus_i{0.0, -1.0};

  auto rhs = [&](const Amplitudes& in, Amplitudes& out) {
    h.apply(as_span(in), as_span(out));
    out *= minus_i;
  };

  Amplitudes psi = psi0.amps;
  Amplitudes k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t s = 0; s < steps; ++s) {
    rhs(psi, k1);
    tmp = psi + (0.5 * dz) * k1;
    rhs(tmp, k2);
    tmp = psi + (0.5 * dz) * k2;
    rhs(tmp, k3);
    tmp = psi + dz * k3;
    rhs(tmp, k4);
    psi += (dz / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return {psi};
}

}  // namespace cqw
