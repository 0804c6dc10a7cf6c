#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cqw/lattice.hpp"
#include "cqw/propagators.hpp"
#include "testing_support.hpp"

using namespace cqw;
using Catch::Approx;

TEST_CASE("open chain transcribes the coupled-mode equation", "[lattice]") {
  LatticeSpec spec = LatticeSpec::uniform(3, 1.0);
  spec.beta = {0.0, 0.0, 0.0};
  const Eigen::MatrixXd dense = build_hamiltonian(spec).dense();
  Eigen::Matrix3d expected;
  expected << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(dense == expected);
}

TEST_CASE("minus-degree convention puts -d_j * gamma on the diagonal", "[lattice]") {
  LatticeSpec spec = LatticeSpec::uniform(3, 1.0);
  spec.diag_convention = DiagConvention::MinusDegreeGamma;
  const auto h = build_hamiltonian(spec);
  CHECK(h.diag() == std::vector<double>{-1.0, -2.0, -1.0});

  // Same operator as BetaAsGiven with beta_j = -d_j * mean coupling.
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> c(0.5, 1.5);
  LatticeSpec rough = LatticeSpec::uniform(9, 1.0);
  for (auto& x : rough.coupling) x = c(gen);
  rough.diag_convention = DiagConvention::MinusDegreeGamma;
  LatticeSpec explicit_beta = rough;
  explicit_beta.diag_convention = DiagConvention::BetaAsGiven;
  const double gamma = rough.mean_coupling();
  explicit_beta.beta.assign(9, -2.0 * gamma);
  explicit_beta.beta.front() = explicit_beta.beta.back() = -gamma;
  CHECK(build_hamiltonian(rough).dense() == build_hamiltonian(explicit_beta).dense());
}

TEST_CASE("periodic ring has corner couplings", "[lattice]") {
  const auto h = build_hamiltonian(LatticeSpec::uniform(4, 1.0, Boundary::Periodic));
  const auto m = h.dense();
  CHECK(m(0, 3) == 1.0);
  CHECK(m(3, 0) == 1.0);
  CHECK(m.diagonal().isZero());
}

TEST_CASE("lattice spec rejects invalid input", "[lattice]") {
  CHECK_THROWS_AS(build_hamiltonian(LatticeSpec::uniform(1, 1.0)), std::invalid_argument);

  LatticeSpec negative = LatticeSpec::uniform(4, 1.0);
  negative.coupling[1] = 0.0;
  CHECK_THROWS_AS(build_hamiltonian(negative), std::invalid_argument);

  LatticeSpec wrong_len = LatticeSpec::uniform(4, 1.0);
  wrong_len.boundary = Boundary::Periodic;  // needs 4 couplings, has 3
  CHECK_THROWS_AS(build_hamiltonian(wrong_len), std::invalid_argument);

  LatticeSpec bad_beta = LatticeSpec::uniform(4, 1.0);
  bad_beta.beta = {0.0, std::nan(""), 0.0, 0.0};
  CHECK_THROWS_AS(build_hamiltonian(bad_beta), std::invalid_argument);
}

TEST_CASE("apply_hamiltonian basic actions", "[lattice]") {
  const auto swap = build_hamiltonian(LatticeSpec::uniform(2, 1.0));
  WaveFunction e0{Amplitudes::Zero(2)};
  e0.amps[0] = 1.0;
  const auto out = apply_hamiltonian(swap, e0);
  CHECK(out[0] == Complex(0.0));
  CHECK(out[1] == Complex(1.0));

  // Zero-energy eigenvector (1, 0, -1)/sqrt2 of the 3-site chain.
  const auto h3 = build_hamiltonian(LatticeSpec::uniform(3, 1.0));
  WaveFunction zero_mode{Amplitudes::Zero(3)};
  zero_mode.amps[0] = 1.0 / std::sqrt(2.0);
  zero_mode.amps[2] = -1.0 / std::sqrt(2.0);
  CHECK(apply_hamiltonian(h3, zero_mode).norm() == 0.0);

  WaveFunction wrong{Amplitudes::Zero(4)};
  CHECK_THROWS_AS(apply_hamiltonian(h3, wrong), std::invalid_argument);
}

TEST_CASE("apply_hamiltonian matches the dense product and is symmetric", "[lattice][property]") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = testing::random_lattice(gen, 2, 60);
    const auto h = build_hamiltonian(spec);
    const WaveFunction psi{testing::random_state(spec.n_sites, gen)};
    const WaveFunction phi{testing::random_state(spec.n_sites, gen)};
    const Amplitudes h_psi = apply_hamiltonian(h, psi);
    const Amplitudes dense = h.dense().cast<Complex>() * psi.amps;
    CHECK(testing::max_abs_diff(h_psi, dense) < 1e-13);

    const Complex lhs = phi.amps.dot(h_psi);
    const Complex rhs = apply_hamiltonian(h, phi).dot(psi.amps);
    CHECK(std::abs(lhs - rhs) < 1e-13);

    const Eigen::MatrixXd m = h.dense();
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }

  const std::size_t n = 50;
  const auto h = build_hamiltonian(testing::random_lattice(gen, n, n));
  const WaveFunction psi{testing::random_state(n, gen)};
  CHECK(testing::max_abs_diff(apply_hamiltonian(h, psi), h.dense().cast<Complex>() * psi.amps) < 1e-13);
}

TEST_CASE("initial states", "[lattice]") {
  const auto single = make_initial_state(SingleSite{5}, 11);
  CHECK(single.amps[5] == Complex(1.0));
  CHECK(single.amps.norm() == 1.0);

  const auto pair = make_initial_state(TwoSite{42, 43, 0.0}, 100);
  CHECK(pair.amps[42].real() == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(pair.amps[43].real() == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(pair.norm_squared() - 1.0) < 1e-12);

  const auto phased = make_initial_state(TwoSite{0, 1, M_PI / 2}, 4);
  CHECK(std::abs(phased.amps[1] - Complex(0.0, 1.0 / std::sqrt(2.0))) < 1e-15);

  const auto beam = make_initial_state(GaussianBeam{50.0, 3.0, 0.0}, 101);
  CHECK(std::abs(beam.norm_squared() - 1.0) < 1e-12);
  for (int k = 1; k <= 50; ++k) CHECK(beam.amps[50 + k] == beam.amps[50 - k]);

  const auto tilted = make_initial_state(GaussianBeam{20.0, 2.0, 0.3}, 41);
  CHECK(std::abs(tilted.norm_squared() - 1.0) < 1e-12);
  CHECK(std::arg(tilted.amps[21] / tilted.amps[20]) == Approx(0.3));

  CHECK_THROWS_AS(make_initial_state(SingleSite{11}, 11), std::invalid_argument);
  CHECK_THROWS_AS(make_initial_state(TwoSite{3, 3, 0.0}, 11), std::invalid_argument);
  CHECK_THROWS_AS(make_initial_state(GaussianBeam{5.0, 0.0, 0.0}, 11), std::invalid_argument);
}

TEST_CASE("uniform diagonal shift is a global phase", "[lattice][property]") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = testing::random_lattice(gen, 5, 80);
    auto shifted = spec;
    for (auto& b : shifted.beta) b += 3.7;
    const WaveFunction psi0{testing::random_state(spec.n_sites, gen)};
    const ZGrid grid({0.5, 2.0, 7.5});
    const auto a = evolve_eigen(build_hamiltonian(spec), psi0, grid);
    const auto b = evolve_eigen(build_hamiltonian(shifted), psi0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Eigen::VectorXd pa = a.states[i].amps.cwiseAbs2();
      const Eigen::VectorXd pb = b.states[i].amps.cwiseAbs2();
      CHECK((pa - pb).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}
