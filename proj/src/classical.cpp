#include "moebius/classical.hpp"

#include "moebius/geometry.hpp"

#include <cmath>
#include <string>

namespace moebius::classical {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kFourPi = 4.0 * M_PI;
constexpr double kInitResidualTol = 1e-9;
constexpr double kFrameMatchTol = 1e-8;
constexpr double kDriftTol = 1e-6;
constexpr double kNumericDerivStep = 1e-6;

double finite_or_throw(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw std::runtime_error(std::string("moebius: non-finite evaluation of ") + what);
    }
    return value;
}

/// Unit tangent of the meridian circle, d/dtheta (sin, cos, 0).
Vec3 meridian_tangent(double theta) {
    return {std::cos(theta), -std::sin(theta), 0.0};
}

Vec3 meridian_position(double orbit_radius, double theta) {
    return {orbit_radius * std::sin(theta), orbit_radius * std::cos(theta), 0.0};
}

/// Energy of the reduced meridian system.
double reduced_energy(const SpinningBody& body, double theta, double p_theta,
                      const CirclePotential& V) {
    const double inertia = effective_mass(body) * body.orbit_radius * body.orbit_radius;
    return p_theta * p_theta / (2.0 * inertia) + V.value(theta);
}

struct OnCircleState {
    double theta = 0.0;
    double p_theta = 0.0;
};

/// Recovers (theta, p_theta) from a phase point on the meridian,
/// resolving the double-cover sheet from the attached frame.
OnCircleState reduce_state(const PhaseState& init, const SpinningBody& body) {
    const double r = body.orbit_radius;
    double theta = std::atan2(init.x.x(), init.x.y());
    if (theta < 0.0) theta += kTwoPi;

    const double lower = frame_mismatch(init.frame, adapted_frame(body, theta));
    const double upper = frame_mismatch(init.frame, adapted_frame(body, theta + kTwoPi));
    if (std::min(lower, upper) > kFrameMatchTol) {
        throw std::invalid_argument("moebius: evolve requires a surface-adapted initial frame");
    }
    if (upper < lower) theta += kTwoPi;

    // Meridian motion also needs the momentum tangential to the circle.
    const Vec3 tangent = meridian_tangent(theta);
    const Vec3 off_tangent = init.p - init.p.dot(tangent) * tangent;
    if (off_tangent.norm() > kInitResidualTol * (1.0 + init.p.norm())) {
        throw std::invalid_argument("moebius: evolve requires momentum tangent to the meridian");
    }
    return {theta, r * init.p.dot(tangent)};
}

}  // namespace

void check_body(const SpinningBody& body) {
    if (!(body.mass_m0 > 0.0) || !(body.size_rho > 0.0) || !(body.orbit_radius > 0.0) ||
        !(body.hbar > 0.0) || !(body.spin_s >= 0.0)) {
        throw std::invalid_argument(
            "moebius: SpinningBody needs positive mass, size, radius and hbar, spin_s >= 0");
    }
}

double effective_mass(const SpinningBody& body) {
    const double ratio = body.spin_s / body.size_rho;
    return body.mass_m0 / (1.0 + ratio * ratio);
}

double FrameState::orthonormality_residual() const {
    return (e.transpose() * e - Mat3::Identity()).cwiseAbs().maxCoeff();
}

double poisson_bracket(const PhaseField& f, const PhaseField& g,
                       const PhaseState& at, double step) {
    if (!(step > 0.0)) {
        throw std::invalid_argument("moebius: poisson_bracket needs step > 0");
    }

    // Canonical pairs: (t, p0) and the three (x_i, p_i).
    const auto shifted = [&at](int pair, double dq, double dp) {
        PhaseState s = at;
        if (pair == 0) {
            s.t += dq;
            s.p0 += dp;
        } else {
            s.x[pair - 1] += dq;
            s.p[pair - 1] += dp;
        }
        return s;
    };

    double bracket = 0.0;
    for (int pair = 0; pair < 4; ++pair) {
        const auto dq = [&](const PhaseField& field) {
            return (finite_or_throw(field(shifted(pair, step, 0.0)), "bracket operand") -
                    finite_or_throw(field(shifted(pair, -step, 0.0)), "bracket operand")) /
                   (2.0 * step);
        };
        const auto dp = [&](const PhaseField& field) {
            return (finite_or_throw(field(shifted(pair, 0.0, step)), "bracket operand") -
                    finite_or_throw(field(shifted(pair, 0.0, -step)), "bracket operand")) /
                   (2.0 * step);
        };
        bracket += dq(f) * dp(g) - dp(f) * dq(g);
    }
    return bracket;
}

double legendre_residual(double q0dot, const Vec3& qdot, const Vec3& q,
                         const SpinningBody& body, const PositionPotential& V) {
    check_body(body);
    if (q0dot == 0.0) {
        throw std::domain_error("moebius: legendre_residual needs q0dot != 0");
    }
    const double m0 = body.mass_m0;
    const double v = V(q);

    const Vec3 p = (m0 / q0dot) * qdot;
    const double p0 = -0.5 * m0 * qdot.squaredNorm() / (q0dot * q0dot) - v;
    const double lagrangian = 0.5 * m0 * qdot.squaredNorm() / q0dot - q0dot * v;
    return q0dot * p0 + qdot.dot(p) - lagrangian;
}

double first_class_constraint(const PhaseState& state, const SpinningBody& body,
                              const PositionPotential& V) {
    check_body(body);
    const double rho2 = body.size_rho * body.size_rho;
    return state.p0 + state.p.squaredNorm() / (2.0 * body.mass_m0) +
           state.Sigma.squaredNorm() / (2.0 * body.mass_m0 * rho2) + V(state.x);
}

AngularVelocity angular_velocity(const FrameState& frame, const Mat3& frame_dot) {
    if (frame.orthonormality_residual() > 1e-6) {
        throw std::invalid_argument("moebius: angular_velocity needs an orthonormal frame");
    }
    // sigma_ij = sum_a e_i^(a) edot_j^(a) with frame vectors stored as rows.
    const Mat3 raw = frame.e.transpose() * frame_dot;
    AngularVelocity result;
    result.sigma = 0.5 * (raw - raw.transpose());
    result.asymmetry = (raw + raw.transpose()).cwiseAbs().maxCoeff();
    return result;
}

Vec3 spin_dual(const Mat3& Sigma) {
    return {Sigma(1, 2) - Sigma(2, 1),
            Sigma(2, 0) - Sigma(0, 2),
            Sigma(0, 1) - Sigma(1, 0)};
}

Mat3 spin_from_momentum(const Vec3& p, double s) {
    Mat3 Sigma = Mat3::Zero();
    const double half_s = 0.5 * s;
    Sigma(0, 1) = half_s * p.z();
    Sigma(1, 0) = -half_s * p.z();
    Sigma(2, 0) = half_s * p.y();
    Sigma(0, 2) = -half_s * p.y();
    Sigma(1, 2) = half_s * p.x();
    Sigma(2, 1) = -half_s * p.x();
    return Sigma;
}

ConstraintResiduals constraint_residuals(const PhaseState& state, const SpinningBody& body,
                                         const PositionPotential& V,
                                         const FrameState& frame_at_plus_4pi) {
    check_body(body);
    ConstraintResiduals res;
    res.h0 = first_class_constraint(state, body, V);
    res.circle = state.x.squaredNorm() - body.orbit_radius * body.orbit_radius;
    res.spin_align = spin_dual(state.Sigma) - body.spin_s * state.p;
    res.frame_period = frame_mismatch(state.frame, frame_at_plus_4pi);
    return res;
}

CirclePotential CirclePotential::zero() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }};
}

CirclePotential CirclePotential::from_function(std::function<double(double)> v) {
    auto value = std::move(v);
    auto derivative = [value](double theta) {
        return (value(theta + kNumericDerivStep) - value(theta - kNumericDerivStep)) /
               (2.0 * kNumericDerivStep);
    };
    return {value, derivative};
}

CirclePotential CirclePotential::from_function(std::function<double(double)> v,
                                               std::function<double(double)> dv) {
    return {std::move(v), std::move(dv)};
}

FrameState adapted_frame(const SpinningBody& body, double theta) {
    const geometry::MoebiusShape shape{body.orbit_radius, body.orbit_radius / 3.0};
    const Vec3 tangent = meridian_tangent(theta);
    const Vec3 normal = geometry::centerline_normal(shape, theta);
    FrameState frame;
    frame.e.row(0) = tangent;
    frame.e.row(1) = normal;
    frame.e.row(2) = tangent.cross(normal);
    return frame;
}

PhaseState make_circular_state(const SpinningBody& body, double theta, double p_theta,
                               const CirclePotential& V) {
    check_body(body);
    PhaseState state;
    state.x = meridian_position(body.orbit_radius, theta);
    state.p = (p_theta / body.orbit_radius) * meridian_tangent(theta);
    state.Sigma = spin_from_momentum(state.p, body.spin_s);
    state.frame = adapted_frame(body, theta);
    const double rho2 = body.size_rho * body.size_rho;
    state.p0 = -(state.p.squaredNorm() / (2.0 * body.mass_m0) +
                 state.Sigma.squaredNorm() / (2.0 * body.mass_m0 * rho2) + V.value(theta));
    return state;
}

double frame_mismatch(const FrameState& a, const FrameState& b) {
    return (a.e - b.e).cwiseAbs().maxCoeff();
}

Trajectory evolve(const PhaseState& init, const SpinningBody& body,
                  const CirclePotential& V, double dtau, int steps) {
    check_body(body);
    if (!(dtau > 0.0) || steps < 1) {
        throw std::invalid_argument("moebius: evolve needs dtau > 0 and steps >= 1");
    }

    const double r = body.orbit_radius;
    const double circle0 = init.x.squaredNorm() - r * r;
    const Vec3 align0 = spin_dual(init.Sigma) - body.spin_s * init.p;
    if (std::abs(circle0) > kInitResidualTol || align0.cwiseAbs().maxCoeff() > kInitResidualTol) {
        throw std::invalid_argument("moebius: evolve initial state violates the circle or spin constraints");
    }

    OnCircleState reduced = reduce_state(init, body);
    const double inertia = effective_mass(body) * r * r;
    const double rho2 = body.size_rho * body.size_rho;

    // p0 is conjugate to the time coordinate and stays constant; the
    // energy constraint residual below tracks whatever mismatch the spin
    // substitution introduces for nonconstant p_theta.
    const double p0 = init.p0;
    FrameState frame = init.frame;

    Trajectory trajectory;
    trajectory.samples.reserve(static_cast<std::size_t>(steps) + 1);

    const auto record = [&](double tau, double theta, double p_theta) {
        TrajectorySample sample;
        sample.tau = init.tau + tau;
        sample.theta = theta;
        sample.p_theta = p_theta;
        sample.energy = reduced_energy(body, theta, p_theta, V);

        PhaseState& s = sample.state;
        s.t = init.t + tau;
        s.p0 = p0;
        s.x = meridian_position(r, theta);
        s.p = (p_theta / r) * meridian_tangent(theta);
        s.Sigma = spin_from_momentum(s.p, body.spin_s);
        s.frame = frame;
        s.tau = init.tau + tau;

        ConstraintResiduals& res = sample.residuals;
        res.h0 = p0 + s.p.squaredNorm() / (2.0 * body.mass_m0) +
                 s.Sigma.squaredNorm() / (2.0 * body.mass_m0 * rho2) + V.value(theta);
        res.circle = s.x.squaredNorm() - r * r;
        res.spin_align = spin_dual(s.Sigma) - body.spin_s * s.p;
        // Against the closed-form frame one double cover ahead; adapted_frame
        // is exactly 4*pi-periodic, so this measures transport drift from the
        // frame the state must return to.
        res.frame_period = frame_mismatch(frame, adapted_frame(body, theta + kFourPi));

        trajectory.samples.push_back(std::move(sample));
    };

    double theta = reduced.theta;
    double p_theta = reduced.p_theta;
    record(0.0, theta, p_theta);
    const double energy0 = trajectory.samples.front().energy;

    for (int k = 1; k <= steps; ++k) {
        const double theta_old = theta;

        // Leapfrog kick-drift-kick.
        double p_half = p_theta - 0.5 * dtau * V.derivative(theta);
        theta += dtau * p_half / inertia;
        p_theta = p_half - 0.5 * dtau * V.derivative(theta);

        // Exact relative rotation of the adapted frame between the two
        // meridian angles (orbit advance composed with the half-rate twist).
        frame.e = frame.e * adapted_frame(body, theta_old).e.transpose() * adapted_frame(body, theta).e;
        if (frame.orthonormality_residual() > 1e-12) {
            Eigen::JacobiSVD<Mat3> svd(frame.e, Eigen::ComputeFullU | Eigen::ComputeFullV);
            frame.e = svd.matrixU() * svd.matrixV().transpose();
        }

        record(k * dtau, theta, p_theta);

        const TrajectorySample& sample = trajectory.samples.back();
        const double drift = std::abs(sample.energy - energy0);
        trajectory.energy_drift = std::max(trajectory.energy_drift, drift);
        if (drift > kDriftTol || std::abs(sample.residuals.circle) > kDriftTol ||
            sample.residuals.spin_align.cwiseAbs().maxCoeff() > kDriftTol) {
            throw StepSizeError("moebius: constraint drift exceeds 1e-6 at step " +
                                std::to_string(k) + "; reduce dtau");
        }
    }
    return trajectory;
}

}  // namespace moebius::classical
