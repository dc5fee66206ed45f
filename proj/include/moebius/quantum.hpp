#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace moebius::quantum {

struct EffectiveMassInput {
    double mass_m0 = 1.0;
    double spin_s = 0.0;
    double size_rho = 1.0;
};

/// Spin-renormalized mass m0 / (1 + s^2/rho^2).
double effective_mass(const EffectiveMassInput& inp);

/// One-dimensional Hamiltonian on the 4*pi-periodic ring,
///   H = (1/2 m_eff) (-i hbar d/dtheta - hbar A)^2 + V(theta),
/// sampled on a uniform grid theta_j = 4*pi*j/grid_n.
struct RingHamiltonian {
    double m_eff = 1.0;
    double hbar = 1.0;
    double flux_A = 0.0;
    std::vector<double> potential;   // V(theta_j), size grid_n
    int grid_n = 0;
};

/// Samples V on the grid and validates the invariants (grid_n >= 16 and
/// even, finite samples, positive masses).
RingHamiltonian make_ring_hamiltonian(double m_eff, double hbar, double flux_A,
                                      const std::function<double(double)>& V, int grid_n);

void check_ring(const RingHamiltonian& H);

struct Spectrum {
    std::vector<double> eigenvalues;  // ascending
    // Grid-sampled wavefunctions, one inner vector per level, normalized to
    // unit discrete L2 norm (sum |psi_j|^2 * h = 1). Empty unless requested.
    std::vector<std::vector<std::complex<double>>> eigenvectors;
    int grid_n = 0;
    double convergence_estimate = 0.0;  // max level shift vs half-resolution solve
    std::string warning;                // nonempty if the estimate looks unconverged
};

/// Free levels E_n = hbar^2 n^2 / (8 m_eff) for the 4*pi-periodic modes
/// psi_n = exp(i n theta / 2), n = 0, +-1, ..., +-max_n; ascending, the
/// nonzero levels doubly degenerate.
Spectrum free_spectrum_analytic(double m_eff, double hbar, int max_n);

struct FluxLevel {
    int n = 0;
    double energy = 0.0;
};

/// The two readings of the flux-threaded ring spectrum. The minimal
/// coupling set comes from the Hermitian operator acting on the
/// half-integer momentum modes, E_n = (hbar^2/2m)(n/2 - A)^2; the other
/// set is the published closed form E_n = (hbar^2/2m)(n/4 - A)^2. They
/// disagree; both are reported and the numerical solver adjudicates.
struct FluxSpectrumPair {
    double flux_A = 0.0;
    std::vector<FluxLevel> minimal_coupling;  // ascending by energy
    std::vector<FluxLevel> paper_formula;     // ascending by energy
    double max_disagreement = 0.0;            // max |minimal_i - paper_i| over sorted levels
};

FluxSpectrumPair flux_spectrum_analytic(double m_eff, double hbar, double A, int max_n);

/// Dense Hermitian matrix of the discretized ring Hamiltonian:
/// gauge-covariant central differences with wrap-around, i.e. hopping
/// -t e^{-+ i A h} with t = hbar^2/(2 m_eff h^2), h = 4*pi/grid_n.
/// For V = 0 its dispersion is 2t(1 - cos((k - A) h)) on the half-integer
/// momentum lattice, which is exactly invariant under A -> A + 1/2.
Eigen::MatrixXcd build_ring_matrix(const RingHamiltonian& H);

/// Lowest n_levels eigenvalues (and optionally eigenvectors) of the
/// discretized ring Hamiltonian; convergence estimated from a solve at
/// half resolution. Requires n_levels <= grid_n/2.
Spectrum ring_eigensolve(const RingHamiltonian& H, int n_levels, bool want_vectors = false);

struct RadialSpectrum {
    std::vector<double> energies;   // negative (bound) eigenvalues, ascending
    double tail_amplitude = 0.0;    // |u| near r_max relative to max |u|, lowest state
    std::string warning;            // box-size warning if the tail is not negligible
};

/// Bound states of the radial problem
///   -(hbar^2/2m) u'' + [hbar^2 k^2/(8 m r^2) - e2/r] u = E u,
/// u(0) = u(r_max) = 0, on a uniform grid (symmetric tridiagonal
/// discretization). k is the 4*pi-periodic angular integer; the
/// centrifugal coefficient k^2/4 replaces the usual l(l+1).
RadialSpectrum coulomb_radial_solve(int k, double m_eff, double hbar, double charge_e2,
                                    double r_max, int grid_n, int n_levels);

struct CoulombLevel {
    int n = 0;
    int k = 0;
    double energy = 0.0;
    bool allowed = false;   // n^2 - n >= k^2/4
};

/// Published closed form E_n = -(1/2) m_eff c^2 alpha^2 / n^2 for
/// n = 1..n_max, each tagged with the admissibility rule n^2 - n >= k^2/4
/// (checked in exact integer arithmetic).
std::vector<CoulombLevel> coulomb_levels_paper(double m_eff, double alpha, double c,
                                               int n_max, int k);

/// Proton constants: rms charge radius as the size, s = Sigma/p of order
/// 1e-15 m.
struct ProtonConstants {
    double mass_m0 = 1.673e-27;   // kg
    double size_rho = 0.8418e-15; // m
    double spin_s = 1e-15;        // m
};

inline ProtonConstants proton_constants() { return {}; }

/// 8 * m_eff for the proton constants (the denominator of the ground
/// state estimate), approximately 5.6e-27 kg.
double proton_denominator();

/// Ground state estimate p_theta^2 / (8 m_eff) with the proton constants.
double proton_ground_estimate(double p_theta);

}  // namespace moebius::quantum
