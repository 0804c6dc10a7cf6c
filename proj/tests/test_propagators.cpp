#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "cqw/ensembles.hpp"
#include "cqw/oracles.hpp"
#include "cqw/propagators.hpp"
#include "testing_support.hpp"

using namespace cqw;
using Catch::Approx;

namespace {

WaveFunction delta(std::size_t site, std::size_t n) { return make_initial_state(SingleSite{site}, n); }

// exp(+iHz) psi expressed through the forward propagator: H is real, so
// conj(exp(-iHz) conj(psi)) = exp(+iHz) psi.
Amplitudes evolve_backward(const Hamiltonian& h, const Amplitudes& psi, double z) {
  const WaveFunction conj_psi{psi.conjugate()};
  return evolve_eigen(h, conj_psi, ZGrid({z})).states.front().amps.conjugate();
}

}  // namespace

TEST_CASE("z grid validation", "[propagators]") {
  CHECK_THROWS_AS(ZGrid({}), std::invalid_argument);
  CHECK_THROWS_AS(ZGrid({-1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ZGrid({0.0, 1.0, 1.0}), std::invalid_argument);
  const auto g = ZGrid::linspace(0.0, 10.0, 4);
  CHECK(g.values() == std::vector<double>{0.0, 2.5, 5.0, 7.5, 10.0});
  const auto geo = ZGrid::geomspace(1.0, 100.0, 3);
  CHECK(geo[1] == Approx(10.0));
}

TEST_CASE("decompose: known small spectra", "[propagators]") {
  const auto two = decompose(build_hamiltonian(LatticeSpec::uniform(2, 1.0)));
  CHECK(two.eigenvalues[0] == Approx(-1.0).margin(1e-15));
  CHECK(two.eigenvalues[1] == Approx(1.0).margin(1e-15));

  const auto three = decompose(build_hamiltonian(LatticeSpec::uniform(3, 1.0)));
  CHECK(three.eigenvalues[0] == Approx(-std::sqrt(2.0)).margin(1e-14));
  CHECK(three.eigenvalues[1] == Approx(0.0).margin(1e-14));
  CHECK(three.eigenvalues[2] == Approx(std::sqrt(2.0)).margin(1e-14));
}

TEST_CASE("decompose: open uniform chain matches 2C cos(k pi/(N+1))", "[propagators]") {
  const std::size_t n = 100;
  const double c = 1.3;
  const auto spec = decompose(build_hamiltonian(LatticeSpec::uniform(n, c)));
  std::vector<double> closed(n);
  for (std::size_t k = 1; k <= n; ++k) closed[k - 1] = 2.0 * c * std::cos(k * std::numbers::pi / (n + 1));
  std::sort(closed.begin(), closed.end());
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(std::abs(spec.eigenvalues[static_cast<Eigen::Index>(k)] - closed[k]) < 1e-12);
    CHECK(std::abs(spec.eigenvalues[static_cast<Eigen::Index>(k)]) <= 2.0 * c);
  }
}

TEST_CASE("decompose: residual and orthonormality on random lattices", "[propagators][property]") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = build_hamiltonian(testing::random_lattice(gen, 2, 120));
    const auto s = decompose(h);
    const Eigen::MatrixXd m = h.dense();
    const double scale = s.eigenvalues.cwiseAbs().maxCoeff();
    CHECK((m * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff() < 1e-10 * scale);
    const auto n = static_cast<Eigen::Index>(h.size());
    CHECK((s.eigenvectors.transpose() * s.eigenvectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <
          1e-10);
    for (Eigen::Index k = 1; k < n; ++k) CHECK(s.eigenvalues[k] >= s.eigenvalues[k - 1]);
  }
}

TEST_CASE("evolve_eigen: identity at z=0 and Rabi transfer", "[propagators]") {
  const auto h = build_hamiltonian(LatticeSpec::uniform(2, 1.0));
  const auto psi0 = delta(0, 2);
  const auto snaps = evolve_eigen(h, psi0, ZGrid({0.0, std::numbers::pi / 4, std::numbers::pi / 2}));
  CHECK(snaps.states[0].amps == psi0.amps);
  // 2x2 closed form: |psi_0|^2 = cos^2(C z).
  CHECK(std::norm(snaps.states[1].amps[0]) == Approx(0.5).margin(1e-12));
  CHECK(std::abs(std::norm(snaps.states[2].amps[1]) - 1.0) < 1e-10);
}

TEST_CASE("evolve_eigen matches the Bessel oracle and a dense oracle", "[propagators]") {
  const std::size_t n = 101;
  const auto h = build_hamiltonian(LatticeSpec::uniform(n, 1.0));
  const auto snaps = evolve_eigen(h, delta(50, n), ZGrid({5.0}));
  const auto oracle = bessel_free_state(50, 1.0, 5.0, n);
  CHECK(testing::max_abs_diff(snaps.states[0].amps, oracle.amps) < 1e-8);

  std::mt19937_64 gen(5);
  const auto spec = testing::random_lattice(gen, 30, 30);
  const auto hr = build_hamiltonian(spec);
  const WaveFunction psi{testing::random_state(30, gen)};
  const auto ours = evolve_eigen(hr, psi, ZGrid({3.3})).states[0].amps;
  CHECK(testing::max_abs_diff(ours, testing::dense_evolve(hr.dense(), psi.amps, 3.3)) < 1e-10);

  CHECK_THROWS_AS(evolve_eigen(hr, delta(0, 12), ZGrid({1.0})), std::invalid_argument);
}

TEST_CASE("spectral bounds enclose the spectrum", "[propagators]") {
  const auto clean = spectral_bounds(build_hamiltonian(LatticeSpec::uniform(50, 1.0)));
  CHECK(clean.lower <= -2.0);
  CHECK(clean.upper >= 2.0);
  CHECK(clean.lower > -2.0 - 1e-12);

  LatticeSpec disordered = LatticeSpec::uniform(200, 1.0);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> w(-2.0, 2.0);
  disordered.beta.resize(200);
  for (auto& b : disordered.beta) b = w(gen);
  const auto h = build_hamiltonian(disordered);
  const auto b = spectral_bounds(h);
  CHECK(b.lower >= -4.0 - 1e-12);
  CHECK(b.upper <= 4.0 + 1e-12);
  const auto s = decompose(h);
  CHECK(b.lower <= s.eigenvalues.minCoeff());
  CHECK(b.upper >= s.eigenvalues.maxCoeff());

  const auto three = spectral_bounds(build_hamiltonian(LatticeSpec::uniform(3, 1.0)));
  CHECK(three.lower <= -std::sqrt(2.0));
  CHECK(three.upper >= std::sqrt(2.0));

  for (int trial = 0; trial < 20; ++trial) {
    const auto hr = build_hamiltonian(testing::random_lattice(gen, 2, 80));
    const auto br = spectral_bounds(hr);
    const auto sr = decompose(hr);
    CHECK(br.lower <= sr.eigenvalues.minCoeff());
    CHECK(br.upper >= sr.eigenvalues.maxCoeff());
  }
}

TEST_CASE("chebyshev agrees with the eigen path", "[propagators]") {
  const std::size_t n = 101;
  const auto h = build_hamiltonian(LatticeSpec::uniform(n, 1.0));
  const auto psi0 = delta(50, n);
  const ZGrid grid({0.0, 1.0, 10.0});
  const auto cheb = evolve_chebyshev(h, psi0, grid, 1e-12);
  const auto eig = evolve_eigen(h, psi0, grid);
  CHECK(cheb.states[0].amps == psi0.amps);
  CHECK(testing::max_abs_diff(cheb.states[2].amps, eig.states[2].amps) < 1e-10);

  // One off-diagonal disorder realization, N=100.
  const auto rough = sample_disordered_lattice(LatticeSpec::uniform(100, 1.0), DisorderSpec{0.5, 0.0},
                                               SeedPolicy{17}, 0);
  const auto hr = build_hamiltonian(rough);
  const auto a = evolve_chebyshev(hr, delta(42, 100), ZGrid({20.0}), 1e-12);
  const auto b = evolve_eigen(hr, delta(42, 100), ZGrid({20.0}));
  CHECK(testing::max_abs_diff(a.states[0].amps, b.states[0].amps) < 1e-9);
}

TEST_CASE("chebyshev norm drift stays within 10 tol", "[propagators]") {
  std::mt19937_64 gen(8);
  for (const double tol : {1e-6, 1e-9, 1e-12}) {
    const auto spec = testing::random_lattice(gen, 40, 90);
    const auto h = build_hamiltonian(spec);
    const WaveFunction psi0{testing::random_state(spec.n_sites, gen)};
    const auto snaps = evolve_chebyshev(h, psi0, ZGrid::linspace(0.0, 25.0, 10), tol);
    for (const auto& s : snaps.states) CHECK(std::abs(s.amps.norm() - 1.0) < 10.0 * tol);
  }
}

TEST_CASE("chebyshev argument checks and order cap", "[propagators]") {
  const auto h = build_hamiltonian(LatticeSpec::uniform(10, 1.0));
  CHECK_THROWS_AS(ChebyshevPropagator(h, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(ChebyshevPropagator(h, 0.0), std::invalid_argument);
  const ChebyshevPropagator prop(h, 1e-12);
  CHECK(prop.order_for(10.0) > 20);
  CHECK_THROWS_AS(prop.propagate(delta(0, 10).amps, 1e6), NumericalError);
}

TEST_CASE("ode oracle", "[propagators]") {
  const auto h2 = build_hamiltonian(LatticeSpec::uniform(2, 1.0));
  const auto psi0 = delta(0, 2);
  CHECK(evolve_ode_oracle(h2, psi0, 0.0, 1e-3).amps == psi0.amps);
  const auto rabi = evolve_ode_oracle(h2, psi0, std::numbers::pi / 2, 1e-4);
  CHECK(std::abs(std::norm(rabi.amps[1]) - 1.0) < 1e-8);

  const auto h51 = build_hamiltonian(LatticeSpec::uniform(51, 1.0));
  const auto start = delta(25, 51);
  const auto ode = evolve_ode_oracle(h51, start, 3.0, 1e-3);
  const auto eig = evolve_eigen(h51, start, ZGrid({3.0}));
  CHECK(testing::max_abs_diff(ode.amps, eig.states[0].amps) < 1e-7);

  CHECK_THROWS_AS(evolve_ode_oracle(h51, start, 1.0, 0.6), std::invalid_argument);
}

TEST_CASE("unitarity, composition, inner products, time reversal", "[propagators][property]") {
  std::mt19937_64 gen(404);
  for (int trial = 0; trial < 15; ++trial) {
    const auto spec = testing::random_lattice(gen, 2, 101);
    const auto h = build_hamiltonian(spec);
    const WaveFunction psi{testing::random_state(spec.n_sites, gen)};
    const WaveFunction phi{testing::random_state(spec.n_sites, gen)};
    const double z1 = 1.7, z2 = 4.2;

    const auto snaps = evolve_eigen(h, psi, ZGrid({z1, z1 + z2}));
    for (const auto& s : snaps.states) CHECK(std::abs(s.amps.norm() - 1.0) < 1e-10);

    const auto two_step = evolve_eigen(h, snaps.states[0], ZGrid({z2})).states[0];
    CHECK(testing::max_abs_diff(two_step.amps, snaps.states[1].amps) < 1e-10);

    const auto phi_z = evolve_eigen(h, phi, ZGrid({z1})).states[0];
    CHECK(std::abs(std::abs(phi_z.amps.dot(snaps.states[0].amps)) - std::abs(phi.amps.dot(psi.amps))) < 1e-10);

    const Amplitudes back = evolve_backward(h, snaps.states[1].amps, z1 + z2);
    CHECK(testing::max_abs_diff(back, psi.amps) < 1e-10);
  }
}
