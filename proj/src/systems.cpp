#include "dimpol/systems.hpp"

#include <cmath>

#include "dimpol/errors.hpp"

namespace dimpol {

// ---------------------------------------------------------------------------
// Pendulum
// ---------------------------------------------------------------------------

std::vector<double> PendulumContext::context_vector() const {
    return {max_gravity_torque(), natural_frequency(), q, tau_max};
}

std::array<double, 2> pendulum_derivative(const PendulumContext& ctx, double theta,
                                          double theta_dot, double tau) {
    const double theta_ddot = (tau + ctx.max_gravity_torque() * std::sin(theta)) / ctx.inertia();
    return {theta_dot, theta_ddot};
}

double pendulum_cost_rate(const PendulumContext& ctx, double theta, double tau) {
    return ctx.q * ctx.q * theta * theta + tau * tau;
}

bool pendulum_feasible(const PendulumContext& ctx, double tau) {
    return std::abs(tau) <= ctx.tau_max;
}

const ProblemSignature& pendulum_signature() {
    static const ProblemSignature sig = [] {
        const DimVec torque = DimVec::of(1, 2, -2);
        const DimVec inv_time = DimVec::of(0, 0, -1);
        ProblemSignature s;
        s.name = "pendulum";
        s.inputs = {{"tau", torque, Role::input}};
        s.states = {{"theta", DimVec::dimensionless(), Role::state},
                    {"theta_dot", inv_time, Role::state}};
        s.context = {{"mgl", torque, Role::context},
                     {"omega", inv_time, Role::context},
                     {"q", torque, Role::context},
                     {"tau_max", torque, Role::context}};
        s.repeated = {"mgl", "omega"};
        s.validate();
        return s;
    }();
    return sig;
}

void PendulumModel::derivative(std::span<const double> x, std::span<const double> u,
                               std::span<double> dx) const {
    const auto d = pendulum_derivative(ctx_, x[0], x[1], u[0]);
    dx[0] = d[0];
    dx[1] = d[1];
}

double PendulumModel::cost_rate(std::span<const double> x, std::span<const double> u) const {
    return pendulum_cost_rate(ctx_, x[0], u[0]);
}

bool PendulumModel::feasible(std::span<const double>, std::span<const double> u) const {
    return pendulum_feasible(ctx_, u[0]);
}

// ---------------------------------------------------------------------------
// Car
// ---------------------------------------------------------------------------

std::vector<double> CarContext::context_vector() const {
    return {g, l, x_c, y_c, q};
}

double car_mu(double s) {
    return 2.0 / (1.0 + std::exp(-70.0 * s)) - 1.0;
}

double car_acceleration(const CarContext& ctx, double s) {
    const double mu = car_mu(s);
    return mu * ctx.g * ctx.x_c / (ctx.l + mu * ctx.y_c);
}

std::array<double, 2> car_derivative(const CarContext& ctx, double, double x_dot, double s) {
    return {x_dot, car_acceleration(ctx, s)};
}

double car_cost_rate(const CarContext& ctx, double x, double s) {
    const double x_norm = x / ctx.q;
    return x_norm * x_norm + s * s;
}

bool car_feasible(const CarContext& ctx, double s) {
    const double accel = car_acceleration(ctx, s);
    const double front = ctx.g * ctx.x_c - accel * ctx.y_c;
    const double rear = ctx.g * (ctx.l - ctx.x_c) + accel * ctx.y_c;
    return front >= 0.0 && rear >= 0.0;
}

const ProblemSignature& car_signature() {
    static const ProblemSignature sig = [] {
        const DimVec length = DimVec::of(0, 1, 0);
        ProblemSignature s;
        s.name = "car";
        s.inputs = {{"s", DimVec::dimensionless(), Role::input}};
        s.states = {{"x", length, Role::state}, {"x_dot", DimVec::of(0, 1, -1), Role::state}};
        s.context = {{"g", DimVec::of(0, 1, -2), Role::context},
                     {"l", length, Role::context},
                     {"x_c", length, Role::context},
                     {"y_c", length, Role::context},
                     {"q", length, Role::context}};
        s.repeated = {"g", "l"};
        s.validate();
        return s;
    }();
    return sig;
}

void CarModel::derivative(std::span<const double> x, std::span<const double> u,
                          std::span<double> dx) const {
    const auto d = car_derivative(ctx_, x[0], x[1], u[0]);
    dx[0] = d[0];
    dx[1] = d[1];
}

double CarModel::cost_rate(std::span<const double> x, std::span<const double> u) const {
    return car_cost_rate(ctx_, x[0], u[0]);
}

bool CarModel::feasible(std::span<const double>, std::span<const double> u) const {
    return car_feasible(ctx_, u[0]);
}

// ---------------------------------------------------------------------------
// Context tables
// ---------------------------------------------------------------------------

std::span<const PendulumContextEntry> pendulum_context_table() {
    // Three dimensionally similar triplets; each contains the base pendulum,
    // one twice as long and one twice as heavy.
    static const std::vector<PendulumContextEntry> table = {
        {"c_a", {1.0, 10.0, 1.0, 1.0, 5.0}},    //
        {"c_b", {1.0, 10.0, 2.0, 2.0, 10.0}},   //
        {"c_c", {2.0, 10.0, 1.0, 2.0, 10.0}},   //
        {"c_d", {1.0, 10.0, 1.0, 0.5, 10.0}},   //
        {"c_e", {1.0, 10.0, 2.0, 1.0, 20.0}},   //
        {"c_f", {2.0, 10.0, 1.0, 1.0, 20.0}},   //
        {"c_g", {1.0, 10.0, 1.0, 100.0, 10.0}},  //
        {"c_h", {1.0, 10.0, 2.0, 200.0, 20.0}},  //
        {"c_i", {2.0, 10.0, 1.0, 200.0, 20.0}},  //
    };
    return table;
}

std::span<const CarContextEntry> car_context_table() {
    static const std::vector<CarContextEntry> table = {
        {"c_a", {9.8, 2.0, 1.0, 1.0, 40.0}},  //
        {"c_b", {9.8, 1.0, 0.5, 0.5, 20.0}},  //
        {"c_c", {9.8, 3.0, 1.5, 1.5, 60.0}},  //
        {"c_d", {9.8, 2.0, 1.0, 3.0, 20.0}},  //
        {"c_e", {9.8, 1.0, 0.5, 1.5, 10.0}},  //
        {"c_f", {9.8, 3.0, 1.5, 4.5, 30.0}},  //
        {"c_g", {9.8, 2.0, 1.0, 0.2, 4.0}},   //
        {"c_h", {9.8, 1.0, 0.5, 0.1, 2.0}},   //
        {"c_i", {9.8, 3.0, 1.5, 0.3, 6.0}},   //
    };
    return table;
}

const PendulumContext& pendulum_table_context(std::string_view name) {
    for (const auto& entry : pendulum_context_table())
        if (entry.name == name) return entry.context;
    throw Error("unknown pendulum context '" + std::string(name) + "'");
}

const CarContext& car_table_context(std::string_view name) {
    for (const auto& entry : car_context_table())
        if (entry.name == name) return entry.context;
    throw Error("unknown car context '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// DP problem construction
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<double>> scalar_control_set(double lo, double hi, std::size_t count) {
    std::vector<std::vector<double>> set;
    set.reserve(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        set.push_back({lo + static_cast<double>(i) * step});
    return set;
}

}  // namespace

DPConfig pendulum_dp_config(const PendulumContext& ctx, const BenchmarkDpSettings& s) {
    const double omega = ctx.natural_frequency();
    const double dt_star = s.dt_star > 0.0 ? s.dt_star : kPendulumDtStar;
    const double horizon_star = s.horizon_star > 0.0 ? s.horizon_star : kPendulumHorizonStar;

    DPConfig cfg;
    cfg.state_grid = {
        {"theta", -2.0 * M_PI, 2.0 * M_PI, s.grid_points},
        {"theta_dot", -M_PI * omega, M_PI * omega, s.grid_points},
    };
    cfg.control_set = scalar_control_set(-ctx.tau_max, ctx.tau_max, s.control_points);
    cfg.dt = dt_star / omega;
    cfg.steps = static_cast<std::size_t>(std::llround(horizon_star / dt_star));
    cfg.target = {{0.0, 0.0}, {s.capture_tol_star, s.capture_tol_star * omega}};
    // Cost rates carry torque^2 units, so the dimensionless cost constant is
    // scaled by (m g l)^2 / omega.
    const double G = ctx.max_gravity_torque();
    cfg.oob_cost = s.oob_cost_star * G * G / omega;
    cfg.target_cost = 0.0;
    cfg.threads = s.threads;
    return cfg;
}

DPConfig car_dp_config(const CarContext& ctx, const BenchmarkDpSettings& s) {
    const double time_scale = std::sqrt(ctx.g / ctx.l);  // dimensionless time per second
    const double speed_scale = std::sqrt(ctx.g * ctx.l);
    const double dt_star = s.dt_star > 0.0 ? s.dt_star : kCarDtStar;
    const double horizon_star = s.horizon_star > 0.0 ? s.horizon_star : kCarHorizonStar;

    DPConfig cfg;
    cfg.state_grid = {
        {"x", -10.0 * ctx.l, 10.0 * ctx.l, s.grid_points},
        {"x_dot", -2.0 * speed_scale, 2.0 * speed_scale, s.grid_points},
    };
    cfg.control_set = scalar_control_set(-kCarSlipMax, kCarSlipMax, s.control_points);
    cfg.dt = dt_star / time_scale;
    cfg.steps = static_cast<std::size_t>(std::llround(horizon_star / dt_star));
    cfg.target = {{0.0, 0.0}, {s.capture_tol_star * ctx.l, s.capture_tol_star * speed_scale}};
    // Cost rates are dimensionless, so the constant only carries time units.
    cfg.oob_cost = s.oob_cost_star / time_scale;
    cfg.target_cost = 0.0;
    cfg.threads = s.threads;
    return cfg;
}

ScalingTransforms pendulum_transforms(const PendulumContext& ctx) {
    return transforms_for(pendulum_signature(), ctx.context_vector());
}

ScalingTransforms car_transforms(const CarContext& ctx) {
    return transforms_for(car_signature(), ctx.context_vector());
}

}  // namespace dimpol
