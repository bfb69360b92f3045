#pragma once

#include <array>
#include <optional>
#include <utility>

#include "dimpol/dims.hpp"
#include "dimpol/systems.hpp"

namespace dimpol {

/// Closed-form infinite-horizon LQR solution for the linearized pendulum
/// (G = m g l, H = m l^2, position weight q, unit input weight).
struct LqrSolution {
    double G = 0.0;
    double H = 0.0;
    double q = 0.0;
    double a = 0.0;  // position gain
    double b = 0.0;  // velocity gain

    /// Cost-to-go matrix, row-major 2x2.
    std::array<double, 4> S() const { return {b * (a - G), a * H, a * H, b * H}; }

    /// Stabilizing feedback tau = -(a theta + b theta_dot).
    double eval(double theta, double theta_dot) const { return -(a * theta + b * theta_dot); }

    /// Same gains with a positive sign, matching the form some references
    /// print; destabilizing for the inverted linearization.
    double eval_positive(double theta, double theta_dot) const {
        return a * theta + b * theta_dot;
    }
};

/// a = G + sqrt(G^2 + q^2), b = sqrt(2 a H). Throws DomainError unless
/// G, H > 0 and q >= 0.
LqrSolution lqr_gains(double G, double H, double q);

/// Max-abs entry of S A + A^T S - S B R^-1 B^T S + Q with Q = diag(q^2, 0);
/// near machine zero for lqr_gains output.
double riccati_residual(const LqrSolution& sol);

/// Coefficients (k_theta, k_theta_dot) of the dimensionless optimal law
/// tau* = k_theta theta* + k_theta_dot theta_dot* as functions of q* alone.
std::pair<double, double> lqr_dimensionless_gains(double q_star);

/// Computed-torque law for the pendulum: gravity compensation plus imposed
/// second-order error dynamics toward the upright rest state.
struct CtPolicy {
    double m = 1.0;
    double g = 10.0;
    double l = 1.0;
    CtTask task;

    double eval(double theta, double theta_dot) const;
};

/// Signature of the unconstrained linear-quadratic problem: context
/// (m g l, omega, q), repeated (m g l, omega).
const ProblemSignature& lqr_signature();

/// Signature of the computed-torque problem: context (m g l, omega,
/// omega_d, zeta), repeated (m g l, omega).
const ProblemSignature& ct_signature();

enum class AnalyticKind { lqr, computed_torque };

/// Compares the scaled transfer of the closed-form law from context a
/// against direct substitution of context b, on a 50x50 probe grid. Returns
/// the max deviation relative to the largest magnitude of the direct law.
/// Throws NotSimilar when the dimensionless contexts differ; the
/// computed-torque kind requires both tasks.
double verify_transfer_analytic(AnalyticKind kind, const PendulumContext& ctx_a,
                                const PendulumContext& ctx_b,
                                const std::optional<CtTask>& task_a = std::nullopt,
                                const std::optional<CtTask>& task_b = std::nullopt);

}  // namespace dimpol
