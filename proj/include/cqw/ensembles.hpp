#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "cqw/lattice.hpp"
#include "cqw/propagators.hpp"

namespace cqw {

/// Static disorder of a lattice realization.
///  - couplings: C_j -> C_j (1 + offdiag_strength * u_j), u_j uniform on [-1, 1)
///  - on-site:   beta_j -> beta_j + diag_strength * (v_j - 1/2), v_j uniform on [0, 1)
struct DisorderSpec {
  double offdiag_strength = 0.0;
  double diag_strength = 0.0;

  void validate() const;
  bool is_clean() const { return offdiag_strength == 0.0 && diag_strength == 0.0; }
  bool operator==(const DisorderSpec&) const = default;
};

/// Temporal disorder: fresh on-site terms uniform on
/// [-phase_strength/2, phase_strength/2) for every site and every segment of
/// length segment_length along z.
struct DephasingSpec {
  double segment_length = 1.0;
  double phase_strength = 0.0;

  void validate() const;
  bool operator==(const DephasingSpec&) const = default;
};

/// Random stream of realization k is a pure function of (master_seed, k).
struct SeedPolicy {
  std::uint64_t master_seed = 0;

  std::mt19937_64 stream(std::uint64_t realization) const;
};

/// Uniform double on [0, 1) from the top 53 bits of one draw; identical on
/// every platform, unlike std::uniform_real_distribution.
double uniform01(std::mt19937_64& gen);

struct EnsembleStats {
  std::size_t n_realizations = 0;
  ZGrid zgrid{{0.0}};
  // [z index][site]
  std::vector<std::vector<double>> mean_intensity;
  std::vector<std::vector<double>> sem_intensity;
  // [z index], ensemble means of per-realization observables
  std::vector<double> mean_variance;
  std::vector<double> mean_participation;
  // [z index], worst | ||psi||^2 - 1 | over realizations
  std::vector<double> max_norm_error;
};

struct EnsembleOptions {
  Method method = Method::Eigen;
  double tol = 1e-12;     // Chebyshev truncation
  unsigned workers = 0;   // 0: default_worker_count()
};

LatticeSpec sample_disordered_lattice(const LatticeSpec& base, const DisorderSpec& disorder,
                                      const SeedPolicy& seeds, std::uint64_t realization);

/// Clean evolution of a single lattice with the requested method.
Snapshots evolve(const Hamiltonian& h, const WaveFunction& psi0, const ZGrid& zgrid, const EnsembleOptions& options);

/// Realizations are evaluated in parallel blocks and reduced in realization
/// order, so the statistics do not depend on the worker count.
EnsembleStats run_ensemble(const LatticeSpec& base, const DisorderSpec& disorder, const InitialStateSpec& init,
                           const ZGrid& zgrid, std::size_t n_realizations, std::uint64_t master_seed,
                           const EnsembleOptions& options = {});

/// Piecewise-constant temporal noise on top of `base`. Each realization is
/// evolved segment by segment with the Chebyshev propagator. With
/// phase_strength 0 every realization is the clean evolution of `base`.
EnsembleStats evolve_dephasing(const LatticeSpec& base, const DephasingSpec& dephasing, const InitialStateSpec& init,
                               const ZGrid& zgrid, std::size_t n_realizations, std::uint64_t master_seed,
                               const EnsembleOptions& options = {});

}  // namespace cqw
