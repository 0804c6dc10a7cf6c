#include "cqw/lattice.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace cqw {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

LatticeSpec LatticeSpec::uniform(std::size_t n_sites, double coupling, Boundary boundary) {
  LatticeSpec spec;
  spec.n_sites = n_sites;
  spec.boundary = boundary;
  const std::size_t n_bonds = boundary == Boundary::Periodic ? n_sites : (n_sites > 0 ? n_sites - 1 : 0);
  spec.coupling.assign(n_bonds, coupling);
  return spec;
}

void LatticeSpec::validate() const {
  require(n_sites >= 2, "lattice needs at least 2 sites, got " + std::to_string(n_sites));
  // A 2-site ring would put both bonds on the same pair of sites.
  require(boundary != Boundary::Periodic || n_sites >= 3, "periodic lattice needs at least 3 sites");
  require(coupling.size() == expected_coupling_count(),
          "coupling vector has " + std::to_string(coupling.size()) + " entries, expected " +
              std::to_string(expected_coupling_count()) +
              (boundary == Boundary::Periodic ? " (periodic)" : " (open)"));
  for (std::size_t j = 0; j < coupling.size(); ++j) {
    require(std::isfinite(coupling[j]) && coupling[j] > 0.0,
            "coupling[" + std::to_string(j) + "] must be finite and > 0");
  }
  require(beta.empty() || beta.size() == n_sites,
          "beta vector has " + std::to_string(beta.size()) + " entries, expected " + std::to_string(n_sites));
  for (std::size_t j = 0; j < beta.size(); ++j) {
    require(std::isfinite(beta[j]), "beta[" + std::to_string(j) + "] must be finite");
  }
}

double LatticeSpec::mean_coupling() const {
  if (coupling.empty()) return 0.0;
  return std::accumulate(coupling.begin(), coupling.end(), 0.0) / static_cast<double>(coupling.size());
}

Hamiltonian::Hamiltonian(std::vector<double> diag, std::vector<double> offdiag, bool periodic)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)), periodic_(periodic) {
  const std::size_t expected = periodic_ ? diag_.size() : diag_.size() - 1;
  require(diag_.size() >= 2 && offdiag_.size() == expected, "inconsistent Hamiltonian dimensions");
}

void Hamiltonian::apply(std::span<const Complex> in, std::span<Complex> out) const {
  const std::size_t n = size();
  require(in.size() == n && out.size() == n,
          "dimension mismatch: operator is " + std::to_string(n) + ", vector is " + std::to_string(in.size()));
  out[0] = diag_[0] * in[0] + offdiag_[0] * in[1];
  for (std::size_t j = 1; j + 1 < n; ++j) {
    out[j] = diag_[j] * in[j] + offdiag_[j] * in[j + 1] + offdiag_[j - 1] * in[j - 1];
  }
  out[n - 1] = diag_[n - 1] * in[n - 1] + offdiag_[n - 2] * in[n - 2];
  if (periodic_) {
    const double corner = offdiag_[n - 1];
    out[0] += corner * in[n - 1];
    out[n - 1] += corner * in[0];
  }
}

Eigen::MatrixXd Hamiltonian::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m(j, j) = diag_[j];
  for (Eigen::Index j = 0; j + 1 < n; ++j) m(j, j + 1) = m(j + 1, j) = offdiag_[j];
  if (periodic_) m(0, n - 1) = m(n - 1, 0) = offdiag_[n - 1];
  return m;
}

Hamiltonian Hamiltonian::with_diag(std::vector<double> diag) const {
  require(diag.size() == size(), "diagonal length mismatch");
  return Hamiltonian(std::move(diag), offdiag_, periodic_);
}

Hamiltonian build_hamiltonian(const LatticeSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_sites;
  std::vector<double> diag(n);
  if (spec.diag_convention == DiagConvention::MinusDegreeGamma) {
    const double gamma = spec.mean_coupling();
    for (std::size_t j = 0; j < n; ++j) {
      const bool edge = spec.boundary == Boundary::Open && (j == 0 || j == n - 1);
      diag[j] = -(edge ? 1.0 : 2.0) * gamma;
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) diag[j] = spec.beta_at(j);
  }
  return Hamiltonian(std::move(diag), spec.coupling, spec.boundary == Boundary::Periodic);
}

Amplitudes apply_hamiltonian(const Hamiltonian& h, const WaveFunction& psi) {
  require(psi.size() == h.size(), "dimension mismatch: operator is " + std::to_string(h.size()) +
                                      ", state is " + std::to_string(psi.size()));
  Amplitudes out(psi.amps.size());
  h.apply(psi.view(), {out.data(), psi.size()});
  return out;
}

WaveFunction make_initial_state(const InitialStateSpec& spec, std::size_t n_sites) {
  require(n_sites >= 1, "state needs at least one site");
  auto check_site = [n_sites](std::size_t j) {
    require(j < n_sites, "site index " + std::to_string(j) + " outside [0, " + std::to_string(n_sites) + ")");
  };
  WaveFunction psi{Amplitudes::Zero(static_cast<Eigen::Index>(n_sites))};

  if (const auto* single = std::get_if<SingleSite>(&spec)) {
    check_site(single->site);
    psi.amps[single->site] = 1.0;
  } else if (const auto* pair = std::get_if<TwoSite>(&spec)) {
    check_site(pair->first);
    check_site(pair->second);
    require(pair->first != pair->second, "two-site input needs distinct sites");
    const double s = 1.0 / std::sqrt(2.0);
    psi.amps[pair->first] = s;
    psi.amps[pair->second] = s * std::polar(1.0, pair->relative_phase);
  } else {
    const auto& beam = std::get<GaussianBeam>(spec);
    require(std::isfinite(beam.width_sites) && beam.width_sites > 0.0, "gaussian beam width must be > 0");
    require(std::isfinite(beam.center) && beam.center >= 0.0 && beam.center <= static_cast<double>(n_sites - 1),
            "gaussian beam center outside the lattice");
    for (std::size_t j = 0; j < n_sites; ++j) {
      const double x = static_cast<double>(j) - beam.center;
      const double envelope = std::exp(-x * x / (2.0 * beam.width_sites * beam.width_sites));
      psi.amps[j] = envelope * std::polar(1.0, beam.tilt_phase_per_site * static_cast<double>(j));
    }
    const double norm = psi.amps.norm();
    if (!(norm > 0.0)) throw NumericalError("gaussian beam underflows on the lattice");
    psi.amps /= norm;
  }
  return psi;
}

}  // namespace cqw
