#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace cqw {

using Complex = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;

/// Raised when a numerical routine cannot deliver its accuracy contract
/// (oracle window too small, Chebyshev order cap exceeded, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Boundary { Open, Periodic };

/// How the diagonal of the Hamiltonian is populated.
///  - BetaAsGiven: diag_j = beta_j (coupled-mode form).
///  - MinusDegreeGamma: diag_j = -d_j * mean coupling, d_j the number of
///    neighbours of site j (graph-Laplacian form of the walk generator).
enum class DiagConvention { BetaAsGiven, MinusDegreeGamma };

/// Walk graph of a 1D waveguide lattice.
///
/// `coupling[j]` links sites j and j+1. A periodic lattice carries one extra
/// entry, `coupling[n_sites-1]`, closing the ring between the last and the
/// first site. An empty `beta` means all on-site terms are zero.
struct LatticeSpec {
  std::size_t n_sites = 0;
  std::vector<double> beta;
  std::vector<double> coupling;
  Boundary boundary = Boundary::Open;
  DiagConvention diag_convention = DiagConvention::BetaAsGiven;

  static LatticeSpec uniform(std::size_t n_sites, double coupling,
                             Boundary boundary = Boundary::Open);

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  std::size_t expected_coupling_count() const {
    return boundary == Boundary::Periodic ? n_sites : n_sites - 1;
  }
  double mean_coupling() const;
  double beta_at(std::size_t j) const { return beta.empty() ? 0.0 : beta[j]; }
};

/// Real symmetric tridiagonal operator (plus the two corner entries for a
/// ring). Immutable once built.
class Hamiltonian {
 public:
  Hamiltonian(std::vector<double> diag, std::vector<double> offdiag, bool periodic);

  std::size_t size() const { return diag_.size(); }
  const std::vector<double>& diag() const { return diag_; }
  /// offdiag()[j] couples j and j+1; for a ring the last entry couples n-1 and 0.
  const std::vector<double>& offdiag() const { return offdiag_; }
  bool periodic() const { return periodic_; }

  /// out = H * in. `in` and `out` must not alias.
  void apply(std::span<const Complex> in, std::span<Complex> out) const;

  Eigen::MatrixXd dense() const;

  /// Same couplings, different diagonal.
  Hamiltonian with_diag(std::vector<double> diag) const;

 private:
  std::vector<double> diag_;
  std::vector<double> offdiag_;
  bool periodic_;
};

/// Complex amplitude per site. States produced by make_initial_state are
/// normalized to 1e-12; evolved states carry the propagator's accuracy.
struct WaveFunction {
  Amplitudes amps;

  std::size_t size() const { return static_cast<std::size_t>(amps.size()); }
  double norm_squared() const { return amps.squaredNorm(); }
  std::span<const Complex> view() const { return {amps.data(), size()}; }
};

struct SingleSite {
  std::size_t site;
  bool operator==(const SingleSite&) const = default;
};
struct TwoSite {
  std::size_t first;
  std::size_t second;
  double relative_phase = 0.0;
  bool operator==(const TwoSite&) const = default;
};
struct GaussianBeam {
  double center;
  double width_sites;
  double tilt_phase_per_site = 0.0;
  bool operator==(const GaussianBeam&) const = default;
};
using InitialStateSpec = std::variant<SingleSite, TwoSite, GaussianBeam>;

Hamiltonian build_hamiltonian(const LatticeSpec& spec);

/// H psi as a fresh vector. Throws std::invalid_argument on size mismatch.
Amplitudes apply_hamiltonian(const Hamiltonian& h, const WaveFunction& psi);

WaveFunction make_initial_state(const InitialStateSpec& spec, std::size_t n_sites);

}  // namespace cqw
