#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "moebius/quantum.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

using namespace moebius;
using quantum::RingHamiltonian;

namespace {

RingHamiltonian free_ring(double flux, int grid) {
    return quantum::make_ring_hamiltonian(1.0, 1.0, flux, [](double) { return 0.0; }, grid);
}

/// Closed-form Coulomb oracle: E = -1/(2 nu^2) with nu = n_r + l_eff + 1,
/// l_eff(l_eff + 1) = k^2/4 (atomic-style units).
double coulomb_reference(int k, int n_r) {
    const double l_eff = 0.5 * (-1.0 + std::sqrt(1.0 + static_cast<double>(k) * k));
    const double nu = n_r + l_eff + 1.0;
    return -0.5 / (nu * nu);
}

}  // namespace

TEST_CASE("effective mass: pinned values and monotonicity") {
    CHECK(quantum::effective_mass({2.0, 1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(quantum::effective_mass({3.7, 0.0, 0.5}) == 3.7);

    const auto proton = quantum::proton_constants();
    const double m_eff =
        quantum::effective_mass({proton.mass_m0, proton.spin_s, proton.size_rho});
    CHECK(m_eff == doctest::Approx(6.94e-28).epsilon(1e-2));
    CHECK(8.0 * m_eff == doctest::Approx(5.6e-27).epsilon(1e-2));

    CHECK_THROWS_AS(quantum::effective_mass({-1.0, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(quantum::effective_mass({1.0, 0.1, 0.0}), std::invalid_argument);

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(0.1, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double m0 = dist(rng), rho = dist(rng);
        const double s1 = dist(rng), s2 = s1 + dist(rng);
        CHECK(quantum::effective_mass({m0, s2, rho}) < quantum::effective_mass({m0, s1, rho}));
        CHECK(quantum::effective_mass({m0, s1, rho}) <= m0);
        CHECK(quantum::effective_mass({m0, s1, rho}) <
              quantum::effective_mass({m0, s1, rho + 0.5}));
    }
}

TEST_CASE("free analytic spectrum") {
    const auto spectrum = quantum::free_spectrum_analytic(1.0, 1.0, 2);
    REQUIRE(spectrum.eigenvalues.size() == 5);
    CHECK(spectrum.eigenvalues[0] == 0.0);
    CHECK(spectrum.eigenvalues[1] == doctest::Approx(0.125));
    CHECK(spectrum.eigenvalues[2] == doctest::Approx(0.125));
    CHECK(spectrum.eigenvalues[3] == doctest::Approx(0.5));
    CHECK(spectrum.eigenvalues[4] == doctest::Approx(0.5));
    CHECK(spectrum.eigenvalues[3] == doctest::Approx(4.0 * spectrum.eigenvalues[1]));
}

TEST_CASE("flux analytic spectrum keeps both readings apart") {
    const auto at_zero = quantum::flux_spectrum_analytic(1.0, 1.0, 0.0, 2);
    const auto free_levels = quantum::free_spectrum_analytic(1.0, 1.0, 2).eigenvalues;
    REQUIRE(at_zero.minimal_coupling.size() == free_levels.size());
    for (std::size_t i = 0; i < free_levels.size(); ++i) {
        CHECK(at_zero.minimal_coupling[i].energy == doctest::Approx(free_levels[i]));
    }
    // The published formula reads (n/4 - A)^2: at A=0, n=1 it gives 1/32
    // where minimal coupling gives 1/8.
    CHECK(at_zero.paper_formula[1].energy == doctest::Approx(1.0 / 32.0));
    CHECK(at_zero.minimal_coupling[1].energy == doctest::Approx(1.0 / 8.0));
    CHECK(at_zero.max_disagreement > 0.0);

    const auto quarter = quantum::flux_spectrum_analytic(1.0, 1.0, 0.25, 2);
    bool found = false;
    for (const auto& level : quarter.minimal_coupling) {
        if (level.n == 1) {
            CHECK(level.energy == doctest::Approx(1.0 / 32.0));
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("ring eigensolver reproduces the free spectrum") {
    const auto spectrum = quantum::ring_eigensolve(free_ring(0.0, 1024), 10);
    const auto exact = quantum::free_spectrum_analytic(1.0, 1.0, 5).eigenvalues;
    for (int i = 0; i < 10; ++i) {
        CHECK(std::abs(spectrum.eigenvalues[i] - exact[i]) <=
              1e-3 * std::max(exact[i], 1.0));
    }
    CHECK(spectrum.grid_n == 1024);
    CHECK(spectrum.convergence_estimate > 0.0);
    CHECK(spectrum.convergence_estimate < 2e-3);
    CHECK(spectrum.warning.empty());

    // +-n degeneracy of the nonzero levels.
    for (int pair = 0; pair < 4; ++pair) {
        const double a = spectrum.eigenvalues[1 + 2 * pair];
        const double b = spectrum.eigenvalues[2 + 2 * pair];
        CHECK(std::abs(a - b) / b < 1e-8);
    }
}

TEST_CASE("half-integer flux shifts relabel the spectrum exactly") {
    const auto base = quantum::ring_eigensolve(free_ring(0.0, 512), 10);
    const auto half = quantum::ring_eigensolve(free_ring(0.5, 512), 10);
    const auto generic = quantum::ring_eigensolve(free_ring(0.13, 512), 10);
    const auto shifted = quantum::ring_eigensolve(free_ring(0.63, 512), 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(std::abs(base.eigenvalues[i] - half.eigenvalues[i]) < 1e-9);
        CHECK(std::abs(generic.eigenvalues[i] - shifted.eigenvalues[i]) < 1e-9);
    }
}

TEST_CASE("constant potential shifts every level exactly") {
    const double offset = 0.7;
    const auto plain = quantum::ring_eigensolve(free_ring(0.0, 128), 8);
    const auto lifted = quantum::ring_eigensolve(
        quantum::make_ring_hamiltonian(1.0, 1.0, 0.0, [=](double) { return offset; }, 128), 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(lifted.eigenvalues[i] - plain.eigenvalues[i] - offset) < 1e-10);
    }
}

TEST_CASE("ring matrix is Hermitian with a wrap-around stencil") {
    const auto H = quantum::make_ring_hamiltonian(
        1.0, 1.0, 0.3, [](double theta) { return 0.1 * std::cos(theta / 2.0); }, 64);
    const auto matrix = quantum::build_ring_matrix(H);
    CHECK((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    // Grid point 0 participates in the stencil of the last point.
    CHECK(std::abs(matrix(63, 0)) > 0.0);
    CHECK(matrix(63, 0) == std::conj(matrix(0, 63)));
    CHECK(std::abs(std::abs(matrix(0, 1)) - std::abs(matrix(0, 63))) < 1e-15);
}

TEST_CASE("eigenvectors are normalized and variationally consistent") {
    const auto H = quantum::make_ring_hamiltonian(
        1.0, 1.0, 0.3, [](double theta) { return 0.2 * std::cos(theta / 2.0); }, 256);
    const auto spectrum = quantum::ring_eigensolve(H, 4, true);
    REQUIRE(spectrum.eigenvectors.size() == 4);

    const auto matrix = quantum::build_ring_matrix(H);
    const double h = 4.0 * M_PI / H.grid_n;
    for (int level = 0; level < 4; ++level) {
        const auto& psi = spectrum.eigenvectors[level];
        Eigen::VectorXcd vec(H.grid_n);
        double norm2 = 0.0;
        for (int j = 0; j < H.grid_n; ++j) {
            vec[j] = psi[j];
            norm2 += std::norm(psi[j]) * h;
        }
        CHECK(std::abs(norm2 - 1.0) < 1e-10);

        const std::complex<double> rayleigh =
            (vec.adjoint() * matrix * vec)(0) / (vec.adjoint() * vec)(0);
        CHECK(std::abs(rayleigh.real() - spectrum.eigenvalues[level]) <
              1e-10 * std::max(1.0, std::abs(spectrum.eigenvalues[level])));
        CHECK(std::abs(rayleigh.imag()) < 1e-10);
    }
}

TEST_CASE("ring solver validates its inputs") {
    CHECK_THROWS_AS(quantum::ring_eigensolve(free_ring(0.0, 512), 300), std::invalid_argument);
    CHECK_THROWS_AS(quantum::ring_eigensolve(free_ring(0.0, 512), 0), std::invalid_argument);
    CHECK_THROWS_AS(free_ring(0.0, 15), std::invalid_argument);
    CHECK_THROWS_AS(free_ring(0.0, 14), std::invalid_argument);
    CHECK_THROWS_AS(
        quantum::make_ring_hamiltonian(1.0, 1.0, 0.0,
                                       [](double) { return std::nan(""); }, 64),
        std::invalid_argument);
    CHECK_THROWS_AS(quantum::make_ring_hamiltonian(-1.0, 1.0, 0.0,
                                                   [](double) { return 0.0; }, 64),
                    std::invalid_argument);
}

TEST_CASE("a deliberately coarse grid raises the convergence warning") {
    const auto H = quantum::make_ring_hamiltonian(
        1.0, 1.0, 0.0, [](double theta) { return 50.0 * std::cos(theta); }, 16);
    const auto spectrum = quantum::ring_eigensolve(H, 8);
    CHECK(!spectrum.warning.empty());
}

TEST_CASE("coulomb solver matches the k=0 Rydberg series") {
    const auto solved = quantum::coulomb_radial_solve(0, 1.0, 1.0, 1.0, 200.0, 4000, 3);
    REQUIRE(solved.energies.size() == 3);
    for (int n = 1; n <= 3; ++n) {
        const double exact = -0.5 / (n * n);
        CHECK(std::abs(solved.energies[n - 1] - exact) / std::abs(exact) < 1e-3);
    }
    CHECK(solved.warning.empty());
    CHECK(solved.tail_amplitude < 1e-6);
}

TEST_CASE("coulomb solver matches the non-integer angular momentum closed form") {
    for (int k : {1, 2, 3}) {
        const auto solved = quantum::coulomb_radial_solve(k, 1.0, 1.0, 1.0, 200.0, 16000, 2);
        REQUIRE(solved.energies.size() >= 2);
        for (int nr = 0; nr < 2; ++nr) {
            const double exact = coulomb_reference(k, nr);
            CHECK(std::abs(solved.energies[nr] - exact) / std::abs(exact) < 1e-3);
        }
    }
    // k=2 lowest level sits at the golden-ratio quantum number.
    const auto golden = quantum::coulomb_radial_solve(2, 1.0, 1.0, 1.0, 200.0, 16000, 1);
    CHECK(golden.energies[0] == doctest::Approx(-0.19098300562505255).epsilon(1e-3));
}

TEST_CASE("coulomb levels scale linearly with the effective mass") {
    const auto light = quantum::coulomb_radial_solve(0, 1.0, 1.0, 1.0, 120.0, 3000, 2);
    const auto heavy = quantum::coulomb_radial_solve(0, 2.0, 1.0, 1.0, 120.0, 3000, 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(heavy.energies[i] / light.energies[i] == doctest::Approx(2.0).epsilon(5e-3));
    }
}

TEST_CASE("coulomb solver reports a too-small box and rejects bad input") {
    const auto cramped = quantum::coulomb_radial_solve(0, 1.0, 1.0, 1.0, 5.0, 500, 1);
    CHECK(!cramped.warning.empty());
    CHECK(cramped.tail_amplitude > 1e-6);

    // Scattering-like box states above zero are filtered out.
    const auto many = quantum::coulomb_radial_solve(0, 1.0, 1.0, 1.0, 60.0, 1000, 40);
    CHECK(many.energies.size() < 40);
    for (double energy : many.energies) CHECK(energy < 0.0);

    CHECK_THROWS_AS(quantum::coulomb_radial_solve(0, 1.0, 1.0, 1.0, 200.0, 100, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(quantum::coulomb_radial_solve(0, 1.0, 1.0, -1.0, 200.0, 4000, 1),
                    std::invalid_argument);
}

TEST_CASE("published Coulomb levels carry the admissibility rule") {
    const auto k0 = quantum::coulomb_levels_paper(1.0, 1.0, 1.0, 5, 0);
    REQUIRE(k0.size() == 5);
    CHECK(k0[0].energy == doctest::Approx(-0.5));
    CHECK(k0[3].energy == doctest::Approx(-0.5 / 16.0));
    for (const auto& level : k0) CHECK(level.allowed);

    const auto k2 = quantum::coulomb_levels_paper(1.0, 1.0, 1.0, 3, 2);
    CHECK_FALSE(k2[0].allowed);  // 1 - 1 = 0 < 1
    CHECK(k2[1].allowed);        // 4 - 2 = 2 >= 1

    const auto k3 = quantum::coulomb_levels_paper(1.0, 1.0, 1.0, 3, 3);
    CHECK_FALSE(k3[1].allowed);  // 4 - 2 = 2 < 9/4
    CHECK(k3[2].allowed);        // 9 - 3 = 6 >= 9/4

    CHECK_THROWS_AS(quantum::coulomb_levels_paper(1.0, 1.0, 1.0, 0, 0), std::invalid_argument);
}

TEST_CASE("proton ground state estimate") {
    CHECK(quantum::proton_ground_estimate(0.0) == 0.0);
    const double denominator = quantum::proton_denominator();
    CHECK(denominator > 5.49e-27);
    CHECK(denominator < 5.71e-27);
    CHECK(quantum::proton_ground_estimate(1.0) * 5.6e-27 == doctest::Approx(1.0).epsilon(0.02));
}
