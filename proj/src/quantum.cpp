#include "moebius/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace moebius::quantum {

namespace {

constexpr double kFourPi = 4.0 * M_PI;

void lapack_check(int info, const char* routine) {
    if (info != 0) {
        throw std::runtime_error(std::string("moebius: ") + routine +
                                 " failed with info = " + std::to_string(info));
    }
}

/// Rotate an eigenvector so its largest-magnitude component is real and
/// positive; keeps emitted files stable run to run.
void fix_phase(std::vector<std::complex<double>>& psi) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double mag = std::abs(psi[j]);
        if (mag > best) {
            best = mag;
            imax = j;
        }
    }
    if (best <= 0.0) return;
    const std::complex<double> phase = std::abs(psi[imax]) / psi[imax];
    for (auto& value : psi) value *= phase;
}

struct DenseSolveResult {
    std::vector<double> values;
    std::vector<std::vector<std::complex<double>>> vectors;
};

/// Full dense solve of the discretized ring operator for an arbitrary
/// grid size (internal; also used for the half-resolution estimate).
DenseSolveResult solve_ring_dense(const RingHamiltonian& H, int n_levels, bool want_vectors) {
    const int n = H.grid_n;
    const double h = kFourPi / n;
    const double t = H.hbar * H.hbar / (2.0 * H.m_eff * h * h);
    const char jobz = want_vectors ? 'V' : 'N';

    DenseSolveResult result;
    std::vector<double> w(n);

    if (H.flux_A == 0.0) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j < n; ++j) {
            a(j, j) = 2.0 * t + H.potential[j];
            const int jp = (j + 1) % n;
            a(j, jp) += -t;
            a(jp, j) += -t;
        }
        lapack_check(LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'L', n, a.data(), n, w.data()),
                     "dsyevd");
        result.values.assign(w.begin(), w.begin() + n_levels);
        if (want_vectors) {
            for (int level = 0; level < n_levels; ++level) {
                std::vector<std::complex<double>> psi(n);
                for (int j = 0; j < n; ++j) psi[j] = a(j, level) / std::sqrt(h);
                fix_phase(psi);
                result.vectors.push_back(std::move(psi));
            }
        }
        return result;
    }

    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    const std::complex<double> phase = std::polar(1.0, -H.flux_A * h);
    for (int j = 0; j < n; ++j) {
        a(j, j) = 2.0 * t + H.potential[j];
        const int jp = (j + 1) % n;
        a(j, jp) += -t * phase;
        a(jp, j) += -t * std::conj(phase);
    }
    lapack_check(LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'L', n, a.data(), n, w.data()),
                 "zheevd");
    result.values.assign(w.begin(), w.begin() + n_levels);
    if (want_vectors) {
        for (int level = 0; level < n_levels; ++level) {
            std::vector<std::complex<double>> psi(n);
            for (int j = 0; j < n; ++j) psi[j] = a(j, level) / std::sqrt(h);
            fix_phase(psi);
            result.vectors.push_back(std::move(psi));
        }
    }
    return result;
}

}  // namespace

double effective_mass(const EffectiveMassInput& inp) {
    if (!(inp.mass_m0 > 0.0) || !(inp.size_rho > 0.0) || !(inp.spin_s >= 0.0)) {
        throw std::invalid_argument("moebius: effective_mass needs m0 > 0, rho > 0, s >= 0");
    }
    const double ratio = inp.spin_s / inp.size_rho;
    return inp.mass_m0 / (1.0 + ratio * ratio);
}

void check_ring(const RingHamiltonian& H) {
    if (!(H.m_eff > 0.0) || !(H.hbar > 0.0)) {
        throw std::invalid_argument("moebius: ring Hamiltonian needs m_eff > 0 and hbar > 0");
    }
    if (H.grid_n < 16 || H.grid_n % 2 != 0) {
        throw std::invalid_argument("moebius: grid_n must be even and >= 16");
    }
    if (static_cast<int>(H.potential.size()) != H.grid_n) {
        throw std::invalid_argument("moebius: potential sample count must equal grid_n");
    }
    for (double v : H.potential) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("moebius: potential samples must be finite");
        }
    }
    if (!std::isfinite(H.flux_A)) {
        throw std::invalid_argument("moebius: flux_A must be finite");
    }
}

RingHamiltonian make_ring_hamiltonian(double m_eff, double hbar, double flux_A,
                                      const std::function<double(double)>& V, int grid_n) {
    RingHamiltonian H;
    H.m_eff = m_eff;
    H.hbar = hbar;
    H.flux_A = flux_A;
    H.grid_n = grid_n;
    if (grid_n > 0) {
        H.potential.resize(grid_n);
        for (int j = 0; j < grid_n; ++j) H.potential[j] = V(kFourPi * j / grid_n);
    }
    check_ring(H);
    return H;
}

Spectrum free_spectrum_analytic(double m_eff, double hbar, int max_n) {
    if (!(m_eff > 0.0) || !(hbar > 0.0) || max_n < 0) {
        throw std::invalid_argument("moebius: free_spectrum_analytic needs m_eff, hbar > 0, max_n >= 0");
    }
    Spectrum spectrum;
    spectrum.eigenvalues.push_back(0.0);
    for (int n = 1; n <= max_n; ++n) {
        const double energy = hbar * hbar * n * n / (8.0 * m_eff);
        spectrum.eigenvalues.push_back(energy);  // modes exp(+- i n theta / 2)
        spectrum.eigenvalues.push_back(energy);
    }
    return spectrum;
}

FluxSpectrumPair flux_spectrum_analytic(double m_eff, double hbar, double A, int max_n) {
    if (!(m_eff > 0.0) || !(hbar > 0.0) || max_n < 0) {
        throw std::invalid_argument("moebius: flux_spectrum_analytic needs m_eff, hbar > 0, max_n >= 0");
    }
    FluxSpectrumPair pair;
    pair.flux_A = A;
    const double scale = hbar * hbar / (2.0 * m_eff);
    for (int n = -max_n; n <= max_n; ++n) {
        const double q_min = 0.5 * n - A;
        const double q_pap = 0.25 * n - A;
        pair.minimal_coupling.push_back({n, scale * q_min * q_min});
        pair.paper_formula.push_back({n, scale * q_pap * q_pap});
    }
    const auto by_energy = [](const FluxLevel& a, const FluxLevel& b) {
        return a.energy != b.energy ? a.energy < b.energy : a.n < b.n;
    };
    std::sort(pair.minimal_coupling.begin(), pair.minimal_coupling.end(), by_energy);
    std::sort(pair.paper_formula.begin(), pair.paper_formula.end(), by_energy);
    for (std::size_t i = 0; i < pair.minimal_coupling.size(); ++i) {
        pair.max_disagreement = std::max(
            pair.max_disagreement,
            std::abs(pair.minimal_coupling[i].energy - pair.paper_formula[i].energy));
    }
    return pair;
}

Eigen::MatrixXcd build_ring_matrix(const RingHamiltonian& H) {
    check_ring(H);
    const int n = H.grid_n;
    const double h = kFourPi / n;
    const double t = H.hbar * H.hbar / (2.0 * H.m_eff * h * h);
    const std::complex<double> phase = std::polar(1.0, -H.flux_A * h);

    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        a(j, j) = 2.0 * t + H.potential[j];
        const int jp = (j + 1) % n;  // wraps the last row back onto point 0
        a(j, jp) += -t * phase;
        a(jp, j) += -t * std::conj(phase);
    }
    return a;
}

Spectrum ring_eigensolve(const RingHamiltonian& H, int n_levels, bool want_vectors) {
    check_ring(H);
    if (n_levels < 1 || n_levels > H.grid_n / 2) {
        throw std::invalid_argument("moebius: n_levels must lie in [1, grid_n/2]");
    }

    DenseSolveResult full = solve_ring_dense(H, n_levels, want_vectors);

    Spectrum spectrum;
    spectrum.eigenvalues = std::move(full.values);
    spectrum.eigenvectors = std::move(full.vectors);
    spectrum.grid_n = H.grid_n;

    // Convergence gauge: re-solve with every other sample.
    RingHamiltonian half = H;
    half.grid_n = H.grid_n / 2;
    half.potential.clear();
    for (int j = 0; j < H.grid_n; j += 2) half.potential.push_back(H.potential[j]);
    const int half_levels = std::min(n_levels, half.grid_n / 2);
    if (half_levels >= 1) {
        DenseSolveResult coarse = solve_ring_dense(half, half_levels, false);
        for (int i = 0; i < half_levels; ++i) {
            spectrum.convergence_estimate =
                std::max(spectrum.convergence_estimate,
                         std::abs(spectrum.eigenvalues[i] - coarse.values[i]));
        }
    }

    const double width = spectrum.eigenvalues.back() - spectrum.eigenvalues.front();
    const double scale = std::max({width, std::abs(spectrum.eigenvalues.front()),
                                   std::abs(spectrum.eigenvalues.back()), 1e-12});
    if (spectrum.convergence_estimate > 1e-3 * scale) {
        spectrum.warning = "convergence estimate " + std::to_string(spectrum.convergence_estimate) +
                           " exceeds 1e-3 of the spectral width; increase grid_n";
    }
    return spectrum;
}

RadialSpectrum coulomb_radial_solve(int k, double m_eff, double hbar, double charge_e2,
                                    double r_max, int grid_n, int n_levels) {
    if (!(m_eff > 0.0) || !(hbar > 0.0) || !(charge_e2 > 0.0) || !(r_max > 0.0)) {
        throw std::invalid_argument("moebius: coulomb_radial_solve needs positive m_eff, hbar, e2, r_max");
    }
    if (grid_n < 200) {
        throw std::invalid_argument("moebius: coulomb_radial_solve needs grid_n >= 200");
    }
    if (n_levels < 1 || n_levels > grid_n - 2) {
        throw std::invalid_argument("moebius: coulomb_radial_solve n_levels out of range");
    }

    // Interior points r_i = i*h, i = 1..grid_n-1, Dirichlet ends.
    const int n = grid_n - 1;
    const double h = r_max / grid_n;
    const double t = hbar * hbar / (2.0 * m_eff * h * h);
    const double centrifugal = hbar * hbar * k * k / (8.0 * m_eff);

    std::vector<double> diag(n), off(n - 1, -t);
    for (int i = 0; i < n; ++i) {
        const double r = h * (i + 1);
        diag[i] = 2.0 * t + centrifugal / (r * r) - charge_e2 / r;
    }

    std::vector<double> w(n);
    Eigen::MatrixXd z(n, n_levels);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n_levels) + 2);
    lapack_int found = 0;
    lapack_check(LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(),
                                0.0, 0.0, 1, n_levels, 0.0, &found, w.data(), z.data(), n,
                                isuppz.data()),
                 "dstevr");
    if (found < n_levels) {
        throw std::runtime_error("moebius: dstevr returned fewer eigenpairs than requested");
    }

    RadialSpectrum result;
    for (int i = 0; i < n_levels; ++i) {
        if (w[i] < 0.0) result.energies.push_back(w[i]);
    }

    const double peak = z.col(0).cwiseAbs().maxCoeff();
    result.tail_amplitude = peak > 0.0 ? std::abs(z(n - 1, 0)) / peak : 0.0;
    if (result.tail_amplitude > 1e-6) {
        result.warning = "lowest eigenfunction reaches the box wall (relative amplitude " +
                         std::to_string(result.tail_amplitude) + "); increase r_max";
    }
    return result;
}

std::vector<CoulombLevel> coulomb_levels_paper(double m_eff, double alpha, double c,
                                               int n_max, int k) {
    if (!(m_eff > 0.0) || !(alpha > 0.0) || !(c > 0.0) || n_max < 1) {
        throw std::invalid_argument("moebius: coulomb_levels_paper needs positive inputs, n_max >= 1");
    }
    std::vector<CoulombLevel> levels;
    levels.reserve(n_max);
    for (int n = 1; n <= n_max; ++n) {
        CoulombLevel level;
        level.n = n;
        level.k = k;
        level.energy = -0.5 * m_eff * c * c * alpha * alpha / (static_cast<double>(n) * n);
        // n^2 - n >= k^2/4, kept in integers as 4n(n-1) >= k^2.
        level.allowed = 4LL * n * (n - 1LL) >= static_cast<long long>(k) * k;
        levels.push_back(level);
    }
    return levels;
}

double proton_denominator() {
    const ProtonConstants proton = proton_constants();
    return 8.0 * effective_mass({proton.mass_m0, proton.spin_s, proton.size_rho});
}

double proton_ground_estimate(double p_theta) {
    if (!std::isfinite(p_theta)) {
        throw std::invalid_argument("moebius: proton_ground_estimate needs finite p_theta");
    }
    return p_theta * p_theta / proton_denominator();
}

}  // namespace moebius::quantum
