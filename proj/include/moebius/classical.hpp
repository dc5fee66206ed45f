#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <vector>

namespace moebius::classical {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Physical constants of the spinning body on the meridian circle.
/// spin_s is the ratio of spin magnitude to linear momentum (a length);
/// size_rho the body's size entering its rotational kinetic energy.
struct SpinningBody {
    double mass_m0 = 1.0;
    double size_rho = 1.0;
    double spin_s = 0.0;
    double orbit_radius = 1.0;
    double hbar = 1.0;
};

void check_body(const SpinningBody& body);

/// Spin-renormalized mass m0 / (1 + s^2/rho^2). The same quantity drives
/// the quantum ring Hamiltonian; a cross-module test pins the agreement.
double effective_mass(const SpinningBody& body);

/// Orthonormal orientation triad. Row a holds the a-th frame vector, so
/// e(a, i) is the i-th spatial component of frame vector a.
struct FrameState {
    Mat3 e = Mat3::Identity();

    /// max-norm of e^T e - I.
    double orthonormality_residual() const;
};

struct PhaseState {
    double t = 0.0;                 // time-like coordinate q^0
    double p0 = 0.0;                // conjugate energy variable
    Vec3 x = Vec3::Zero();
    Vec3 p = Vec3::Zero();
    Mat3 Sigma = Mat3::Zero();      // antisymmetric spin tensor
    FrameState frame;
    double tau = 0.0;               // evolution parameter
};

/// Multiplier bookkeeping. The multipliers are never determined
/// dynamically here; the constraints they enforce are monitored as
/// residuals instead.
struct LagrangeMultipliers {
    double lambda = 0.0;
    double xi = 0.0;
    Vec3 eta = Vec3::Zero();
    Mat3 kappa = Mat3::Zero();
};

struct ConstraintResiduals {
    double h0 = 0.0;                // energy constraint
    double circle = 0.0;            // x.x - r^2
    Vec3 spin_align = Vec3::Zero(); // eps^{ijk} Sigma_jk - s p^i
    double frame_period = 0.0;      // max-norm frame mismatch over one double cover
};

using PhaseField = std::function<double(const PhaseState&)>;
using PositionPotential = std::function<double(const Vec3&)>;

/// Central-finite-difference Poisson bracket over the canonical pairs
/// (t, p0) and (x_i, p_i); truncation error O(step^2). Throws
/// std::runtime_error if f or g is non-finite at a stencil point.
double poisson_bracket(const PhaseField& f, const PhaseField& g,
                       const PhaseState& at, double step = 1e-5);

/// q0dot*p0 + qdot.p - L for the reparametrized point-particle
/// Lagrangian L = m0 qdot^2/(2 q0dot) - q0dot V(q), with the momenta
/// derived from L. Vanishes identically; returned as a residual check.
/// Throws std::domain_error if q0dot == 0.
double legendre_residual(double q0dot, const Vec3& qdot, const Vec3& q,
                         const SpinningBody& body, const PositionPotential& V);

/// p0 + p.p/(2 m0) + Sigma:Sigma/(2 m0 rho^2) + V(x) where
/// Sigma:Sigma sums the squares of all tensor components.
double first_class_constraint(const PhaseState& state, const SpinningBody& body,
                              const PositionPotential& V);

struct AngularVelocity {
    Mat3 sigma;                  // antisymmetrized
    double asymmetry = 0.0;      // max-norm of the raw symmetric part
};

/// sigma_ij = sum_a e_i^(a) d/dtau e_j^(a), antisymmetrized as
/// (sigma - sigma^T)/2 with the raw asymmetry reported. Throws
/// std::invalid_argument if the frame orthonormality residual exceeds 1e-6.
AngularVelocity angular_velocity(const FrameState& frame, const Mat3& frame_dot);

/// eps^{ijk} Sigma_jk as a vector (the dual used by the alignment constraint).
Vec3 spin_dual(const Mat3& Sigma);

/// The unique antisymmetric solution of eps^{ijk} Sigma_jk = s p^i:
/// Sigma_jk = (s/2) eps_{jkl} p^l.
Mat3 spin_from_momentum(const Vec3& p, double s);

/// Residuals of the four constraints at a phase point; the frame-period
/// entry compares the state's frame against the caller-provided frame one
/// double cover (4*pi of meridian angle) later.
ConstraintResiduals constraint_residuals(const PhaseState& state, const SpinningBody& body,
                                         const PositionPotential& V,
                                         const FrameState& frame_at_plus_4pi);

/// Potential on the meridian as a function of the (4*pi-periodic) angle.
/// If no analytic derivative is supplied, a central difference is used.
struct CirclePotential {
    std::function<double(double)> value;
    std::function<double(double)> derivative;

    static CirclePotential zero();
    static CirclePotential from_function(std::function<double(double)> v);
    static CirclePotential from_function(std::function<double(double)> v,
                                         std::function<double(double)> dv);
};

/// Surface-adapted orthonormal triad at meridian angle theta: rows are
/// the unit tangent, the centerline normal and their cross product. The
/// normal advances at half the meridian rate, so the triad is
/// 4*pi-periodic with a normal flip after 2*pi.
FrameState adapted_frame(const SpinningBody& body, double theta);

/// Phase point on the constraint surface: position on the meridian
/// circle, tangential momentum p_theta/r, spin locked to the momentum,
/// p0 fixed by the energy constraint, frame adapted to the surface.
PhaseState make_circular_state(const SpinningBody& body, double theta, double p_theta,
                               const CirclePotential& V = CirclePotential::zero());

struct TrajectorySample {
    double tau = 0.0;
    double theta = 0.0;
    double p_theta = 0.0;
    double energy = 0.0;            // p_theta^2/(2 m_eff r^2) + V(theta)
    PhaseState state;
    ConstraintResiduals residuals;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double energy_drift = 0.0;      // max |E_k - E_0|
};

class StepSizeError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Leapfrog integration of the reduced meridian system (theta, p_theta)
/// under E = p_theta^2/(2 m_eff r^2) + V(theta), with the adapted frame
/// transported by the exact per-step rotation (orbit advance plus the
/// half-rate twist about the tangent) and re-orthonormalized by polar
/// projection when roundoff accumulates. The initial state must satisfy
/// the circle and spin-alignment constraints to 1e-9 and carry a
/// surface-adapted frame. Throws StepSizeError if the effective energy
/// or a constraint residual drifts past 1e-6.
Trajectory evolve(const PhaseState& init, const SpinningBody& body,
                  const CirclePotential& V, double dtau, int steps);

/// max-norm of the elementwise frame difference.
double frame_mismatch(const FrameState& a, const FrameState& b);

}  // namespace moebius::classical
