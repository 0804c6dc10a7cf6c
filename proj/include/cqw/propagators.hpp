#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cqw/lattice.hpp"

namespace cqw {

/// Strictly increasing, nonnegative propagation distances.
class ZGrid {
 public:
  explicit ZGrid(std::vector<double> values);
  /// `steps` intervals from start to stop inclusive, i.e. steps+1 points.
  static ZGrid linspace(double start, double stop, std::size_t steps);
  /// `points` logarithmically spaced values in [start, stop], start > 0.
  static ZGrid geomspace(double start, double stop, std::size_t points);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double back() const { return values_.back(); }

 private:
  std::vector<double> values_;
};

enum class Method { Eigen, Chebyshev, Ode };

const char* method_name(Method m);

struct Snapshots {
  ZGrid zgrid;
  std::vector<WaveFunction> states;
  Method method;
};

/// Full eigensystem, eigenvalues ascending, eigenvectors as columns.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

struct SpectralBounds {
  double lower;
  double upper;
};

SpectralDecomposition decompose(const Hamiltonian& h);

/// psi(z) = V exp(-i Lambda z) V^T psi0 at every grid point.
Snapshots evolve_eigen(const Hamiltonian& h, const WaveFunction& psi0, const ZGrid& zgrid);
Snapshots evolve_eigen(const SpectralDecomposition& spectrum, const WaveFunction& psi0, const ZGrid& zgrid);

/// Gershgorin enclosure of the spectrum, widened by a few ulps of the
/// largest row sum so that rounding in the row sums cannot cut it short.
SpectralBounds spectral_bounds(const Hamiltonian& h);

/// Chebyshev expansion of exp(-i H z) applied to a state.
///
/// H is mapped to [-1, 1] with the given bounds; the series is truncated at
/// the first order k after which 3 consecutive coefficients |J_k(a z)| fall
/// below `tol` (a the spectral half-width). Expansion orders beyond
/// `kMaxOrder` raise NumericalError.
class ChebyshevPropagator {
 public:
  static constexpr std::size_t kMaxOrder = 200000;

  ChebyshevPropagator(const Hamiltonian& h, double tol);
  ChebyshevPropagator(const Hamiltonian& h, SpectralBounds bounds, double tol);

  Amplitudes propagate(const Amplitudes& psi, double z) const;
  /// Expansion order that propagate() uses for distance z.
  std::size_t order_for(double z) const;

  const Hamiltonian& hamiltonian() const { return h_; }

 private:
  Hamiltonian h_;
  double center_;
  double half_width_;
  double tol_;
};

Snapshots evolve_chebyshev(const Hamiltonian& h, const WaveFunction& psi0, const ZGrid& zgrid, double tol);

/// Fixed-step classic RK4 integration of i dpsi/dz = H psi. Verification
/// path only. Requires dz_max * spectral radius < 1.
WaveFunction evolve_ode_oracle(const Hamiltonian& h, const WaveFunction& psi0, double z, double dz_max);

}  // namespace cqw
