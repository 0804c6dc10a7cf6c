#include "cqw/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "cqw/observables.hpp"
#include "cqw/parallel.hpp"

namespace cqw {

namespace {

// Realizations evaluated between two ordered reductions. Depends only on the
// problem size, never on the worker count; capped at ~64M buffered doubles.
std::size_t block_size(std::size_t n_z, std::size_t n_sites) {
  constexpr std::size_t kMaxBuffered = std::size_t{1} << 26;
  return std::clamp<std::size_t>(kMaxBuffered / std::max<std::size_t>(1, n_z * n_sites), 1, 64);
}

struct RealizationResult {
  std::vector<std::vector<double>> intensity;  // [z][site]
  std::vector<double> variance;
  std::vector<double> participation;
  std::vector<double> norm_error;
};

RealizationResult summarize(const std::vector<WaveFunction>& states) {
  RealizationResult r;
  r.intensity.reserve(states.size());
  for (const auto& psi : states) {
    auto p = intensity(psi).probs;
    r.variance.push_back(spread_variance(p));
    r.participation.push_back(participation_ratio(p));
    r.norm_error.push_back(std::abs(psi.norm_squared() - 1.0));
    r.intensity.push_back(std::move(p));
  }
  return r;
}

// Welford accumulation in realization order.
class OrderedAccumulator {
 public:
  OrderedAccumulator(std::size_t n_z, std::size_t n_sites)
      : mean_(n_z, std::vector<double>(n_sites, 0.0)), m2_(n_z, std::vector<double>(n_sites, 0.0)),
        variance_(n_z, 0.0), participation_(n_z, 0.0), norm_error_(n_z, 0.0) {}

  void add(const RealizationResult& r) {
    ++count_;
    const double inv = 1.0 / static_cast<double>(count_);
    for (std::size_t z = 0; z < mean_.size(); ++z) {
      auto& mean = mean_[z];
      auto& m2 = m2_[z];
      const auto& x = r.intensity[z];
      for (std::size_t j = 0; j < mean.size(); ++j) {
        const double delta = x[j] - mean[j];
        mean[j] += delta * inv;
        m2[j] += delta * (x[j] - mean[j]);
      }
      variance_[z] += (r.variance[z] - variance_[z]) * inv;
      participation_[z] += (r.participation[z] - participation_[z]) * inv;
      norm_error_[z] = std::max(norm_error_[z], r.norm_error[z]);
    }
  }

  EnsembleStats finish(const ZGrid& zgrid) && {
    EnsembleStats stats;
    stats.n_realizations = count_;
    stats.zgrid = zgrid;
    stats.sem_intensity = m2_;
    for (auto& row : stats.sem_intensity) {
      for (auto& v : row) {
        // Unbiased sample variance of the mean; undefined for one sample.
        v = count_ > 1 ? std::sqrt(std::max(v, 0.0) / static_cast<double>(count_ - 1) / static_cast<double>(count_))
                       : 0.0;
      }
    }
    stats.mean_intensity = std::move(mean_);
    stats.mean_variance = std::move(variance_);
    stats.mean_participation = std::move(participation_);
    stats.max_norm_error = std::move(norm_error_);
    return stats;
  }

 private:
  std::size_t count_ = 0;
  std::vector<std::vector<double>> mean_;
  std::vector<std::vector<double>> m2_;
  std::vector<double> variance_;
  std::vector<double> participation_;
  std::vector<double> norm_error_;
};

EnsembleStats run_blocks(std::size_t n_realizations, std::size_t n_sites, const ZGrid& zgrid, unsigned workers,
                         const std::function<std::vector<WaveFunction>(std::size_t)>& realize) {
  if (n_realizations == 0) throw std::invalid_argument("ensemble needs at least one realization");
  OrderedAccumulator acc(zgrid.size(), n_sites);
  const std::size_t block_len = block_size(zgrid.size(), n_sites);
  std::vector<RealizationResult> block(block_len);
  for (std::size_t first = 0; first < n_realizations; first += block_len) {
    const std::size_t count = std::min(block_len, n_realizations - first);
    parallel_for(count, workers, [&](std::size_t i) { block[i] = summarize(realize(first + i)); });
    for (std::size_t i = 0; i < count; ++i) acc.add(block[i]);
  }
  return std::move(acc).finish(zgrid);
}

}  // namespace

void DisorderSpec::validate() const {
  if (!(offdiag_strength >= 0.0 && offdiag_strength < 1.0)) {
    throw std::invalid_argument("off-diagonal disorder strength w must satisfy 0 <= w < 1, got " +
                                std::to_string(offdiag_strength));
  }
  if (!(diag_strength >= 0.0) || !std::isfinite(diag_strength)) {
    throw std::invalid_argument("diagonal disorder strength W must be finite and >= 0");
  }
}

void DephasingSpec::validate() const {
  if (!(segment_length > 0.0) || !std::isfinite(segment_length)) {
    throw std::invalid_argument("dephasing segment_length must be > 0");
  }
  if (!(phase_strength >= 0.0) || !std::isfinite(phase_strength)) {
    throw std::invalid_argument("dephasing phase_strength must be finite and >= 0");
  }
}

std::mt19937_64 SeedPolicy::stream(std::uint64_t realization) const {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(realization), static_cast<std::uint32_t>(realization >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

LatticeSpec sample_disordered_lattice(const LatticeSpec& base, const DisorderSpec& disorder, const SeedPolicy& seeds,
                                      std::uint64_t realization) {
  base.validate();
  disorder.validate();
  if (disorder.is_clean()) return base;

  LatticeSpec out = base;
  auto gen = seeds.stream(realization);
  // Draw order is part of the reproducibility contract: couplings, then sites.
  if (disorder.offdiag_strength > 0.0) {
    for (auto& c : out.coupling) c *= 1.0 + disorder.offdiag_strength * (2.0 * uniform01(gen) - 1.0);
  }
  if (disorder.diag_strength > 0.0) {
    if (out.beta.empty()) out.beta.assign(out.n_sites, 0.0);
    for (auto& b : out.beta) b += disorder.diag_strength * (uniform01(gen) - 0.5);
  }
  return out;
}

Snapshots evolve(const Hamiltonian& h, const WaveFunction& psi0, const ZGrid& zgrid, const EnsembleOptions& options) {
  switch (options.method) {
    case Method::Eigen: return evolve_eigen(h, psi0, zgrid);
    case Method::Chebyshev: return evolve_chebyshev(h, psi0, zgrid, options.tol);
    case Method::Ode: break;
  }
  throw std::invalid_argument("the ODE integrator is a test oracle, not an ensemble propagator");
}

EnsembleStats run_ensemble(const LatticeSpec& base, const DisorderSpec& disorder, const InitialStateSpec& init,
                           const ZGrid& zgrid, std::size_t n_realizations, std::uint64_t master_seed,
                           const EnsembleOptions& options) {
  base.validate();
  disorder.validate();
  const WaveFunction psi0 = make_initial_state(init, base.n_sites);
  const SeedPolicy seeds{master_seed};
  return run_blocks(n_realizations, base.n_sites, zgrid, options.workers, [&](std::size_t k) {
    const auto lattice = sample_disordered_lattice(base, disorder, seeds, k);
    return evolve(build_hamiltonian(lattice), psi0, zgrid, options).states;
  });
}

EnsembleStats evolve_dephasing(const LatticeSpec& base, const DephasingSpec& dephasing, const InitialStateSpec& init,
                               const ZGrid& zgrid, std::size_t n_realizations, std::uint64_t master_seed,
                               const EnsembleOptions& options) {
  base.validate();
  dephasing.validate();
  const WaveFunction psi0 = make_initial_state(init, base.n_sites);
  const Hamiltonian clean = build_hamiltonian(base);

  if (dephasing.phase_strength == 0.0) {
    const auto states = evolve(clean, psi0, zgrid, options).states;
    return run_blocks(n_realizations, base.n_sites, zgrid, options.workers, [&](std::size_t) { return states; });
  }

  const SeedPolicy seeds{master_seed};
  const double tol = options.tol;
  return run_blocks(n_realizations, base.n_sites, zgrid, options.workers, [&](std::size_t k) {
    auto gen = seeds.stream(k);
    auto draw_segment = [&] {
      std::vector<double> diag = clean.diag();
      for (auto& d : diag) d += dephasing.phase_strength * (uniform01(gen) - 0.5);
      return ChebyshevPropagator(clean.with_diag(std::move(diag)), tol);
    };

    std::vector<WaveFunction> states;
    states.reserve(zgrid.size());
    Amplitudes psi = psi0.amps;
    double z = 0.0;
    std::size_t segment = 0;
    double segment_end = dephasing.segment_length;
    auto prop = draw_segment();
    for (const double target : zgrid.values()) {
      while (z < target) {
        const double step_to = std::min(target, segment_end);
        psi = prop.propagate(psi, step_to - z);
        z = step_to;
        if (z == segment_end) {
          ++segment;
          segment_end = static_cast<double>(segment + 1) * dephasing.segment_length;
          prop = draw_segment();
        }
      }
      states.push_back({psi});
    }
    return states;
  });
}

}  // namespace cqw
