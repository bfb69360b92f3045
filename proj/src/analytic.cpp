#include "dimpol/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "dimpol/errors.hpp"

namespace dimpol {

LqrSolution lqr_gains(double G, double H, double q) {
    if (!(G > 0.0) || !(H > 0.0) || q < 0.0)
        throw DomainError("lqr_gains requires G > 0, H > 0 and q >= 0");
    LqrSolution sol;
    sol.G = G;
    sol.H = H;
    sol.q = q;
    sol.a = G + std::sqrt(G * G + q * q);
    sol.b = std::sqrt(2.0 * sol.a * H);
    return sol;
}

double riccati_residual(const LqrSolution& sol) {
    const double G = sol.G, H = sol.H, q = sol.q, a = sol.a, b = sol.b;
    // A = [0 1; G/H 0], B = [0; 1/H], R = 1, Q = diag(q^2, 0).
    const double s11 = b * (a - G), s12 = a * H, s22 = b * H;
    const double gh = G / H;

    // S A + A^T S
    const double m11 = 2.0 * s12 * gh;
    const double m12 = s11 + s22 * gh;
    const double m22 = 2.0 * s12;
    // S B R^-1 B^T S with S B = [s12/H; s22/H]
    const double v1 = s12 / H, v2 = s22 / H;
    const double k11 = v1 * v1, k12 = v1 * v2, k22 = v2 * v2;

    const double r11 = m11 - k11 + q * q;
    const double r12 = m12 - k12;
    const double r22 = m22 - k22;
    return std::max({std::abs(r11), std::abs(r12), std::abs(r22)});
}

std::pair<double, double> lqr_dimensionless_gains(double q_star) {
    if (q_star < 0.0) throw DomainError("q* must be nonnegative");
    const double k_theta = 1.0 + std::sqrt(1.0 + q_star * q_star);
    const double k_theta_dot = std::sqrt(2.0 * k_theta);
    return {k_theta, k_theta_dot};
}

double CtPolicy::eval(double theta, double theta_dot) const {
    const double G = m * g * l;
    const double H = m * l * l;
    return G * std::sin(theta) - 2.0 * H * task.omega_d * task.zeta * theta_dot -
           H * task.omega_d * task.omega_d * theta;
}

const ProblemSignature& lqr_signature() {
    static const ProblemSignature sig = [] {
        const DimVec torque = DimVec::of(1, 2, -2);
        const DimVec inv_time = DimVec::of(0, 0, -1);
        ProblemSignature s;
        s.name = "pendulum_lqr";
        s.inputs = {{"tau", torque, Role::input}};
        s.states = {{"theta", DimVec::dimensionless(), Role::state},
                    {"theta_dot", inv_time, Role::state}};
        s.context = {{"mgl", torque, Role::context},
                     {"omega", inv_time, Role::context},
                     {"q", torque, Role::context}};
        s.repeated = {"mgl", "omega"};
        s.validate();
        return s;
    }();
    return sig;
}

const ProblemSignature& ct_signature() {
    static const ProblemSignature sig = [] {
        const DimVec torque = DimVec::of(1, 2, -2);
        const DimVec inv_time = DimVec::of(0, 0, -1);
        ProblemSignature s;
        s.name = "pendulum_ct";
        s.inputs = {{"tau", torque, Role::input}};
        s.states = {{"theta", DimVec::dimensionless(), Role::state},
                    {"theta_dot", inv_time, Role::state}};
        s.context = {{"mgl", torque, Role::context},
                     {"omega", inv_time, Role::context},
                     {"omega_d", inv_time, Role::context},
                     {"zeta", DimVec::dimensionless(), Role::context}};
        s.repeated = {"mgl", "omega"};
        s.validate();
        return s;
    }();
    return sig;
}

namespace {

// Max |scaled - direct| over a 50x50 state grid, relative to the largest
// magnitude of the direct law on that grid.
template <typename Direct, typename Source>
double probe_deviation(const Direct& f_direct, const Source& f_source, double out_scale,
                       double vel_scale, double omega_b) {
    constexpr int kProbe = 50;
    double max_dev = 0.0;
    double max_mag = 0.0;
    for (int i = 0; i < kProbe; ++i) {
        const double theta = -M_PI + 2.0 * M_PI * i / (kProbe - 1);
        for (int j = 0; j < kProbe; ++j) {
            const double theta_dot = omega_b * (-M_PI + 2.0 * M_PI * j / (kProbe - 1));
            const double direct = f_direct(theta, theta_dot);
            const double scaled = out_scale * f_source(theta, vel_scale * theta_dot);
            max_dev = std::max(max_dev, std::abs(scaled - direct));
            max_mag = std::max(max_mag, std::abs(direct));
        }
    }
    return max_mag > 0.0 ? max_dev / max_mag : max_dev;
}

}  // namespace

double verify_transfer_analytic(AnalyticKind kind, const PendulumContext& ctx_a,
                                const PendulumContext& ctx_b,
                                const std::optional<CtTask>& task_a,
                                const std::optional<CtTask>& task_b) {
    const double G_a = ctx_a.max_gravity_torque(), G_b = ctx_b.max_gravity_torque();
    const double H_a = ctx_a.inertia(), H_b = ctx_b.inertia();
    const double omega_a = ctx_a.natural_frequency(), omega_b = ctx_b.natural_frequency();
    const double out_scale = G_b / G_a;
    const double vel_scale = omega_a / omega_b;

    if (kind == AnalyticKind::lqr) {
        const std::vector<double> c_a{G_a, omega_a, ctx_a.q};
        const std::vector<double> c_b{G_b, omega_b, ctx_b.q};
        const auto st_a = transforms_for(lqr_signature(), c_a);
        const auto st_b = transforms_for(lqr_signature(), c_b);
        if (!is_similar(st_a, st_b, 1.0e-9))
            throw NotSimilar("dimensionless cost weights differ; q*_a != q*_b");

        const auto f_a = lqr_gains(G_a, H_a, ctx_a.q);
        const auto f_b = lqr_gains(G_b, H_b, ctx_b.q);
        return probe_deviation(
            [&](double th, double thd) { return f_b.eval(th, thd); },
            [&](double th, double thd) { return f_a.eval(th, thd); }, out_scale, vel_scale,
            omega_b);
    }

    if (!task_a || !task_b)
        throw Error("computed-torque transfer check needs both task parameter sets");
    const std::vector<double> c_a{G_a, omega_a, task_a->omega_d, task_a->zeta};
    const std::vector<double> c_b{G_b, omega_b, task_b->omega_d, task_b->zeta};
    const auto st_a = transforms_for(ct_signature(), c_a);
    const auto st_b = transforms_for(ct_signature(), c_b);
    if (!is_similar(st_a, st_b, 1.0e-9))
        throw NotSimilar("task parameters are not dimensionally similar");

    const CtPolicy f_a{ctx_a.m, ctx_a.g, ctx_a.l, *task_a};
    const CtPolicy f_b{ctx_b.m, ctx_b.g, ctx_b.l, *task_b};
    return probe_deviation(
        [&](double th, double thd) { return f_b.eval(th, thd); },
        [&](double th, double thd) { return f_a.eval(th, thd); }, out_scale, vel_scale,
        omega_b);
}

}  // namespace dimpol
