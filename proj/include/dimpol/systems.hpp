#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dimpol/dims.hpp"
#include "dimpol/model.hpp"
#include "dimpol/solver.hpp"

namespace dimpol {

// ---------------------------------------------------------------------------
// Torque-limited pendulum swing-up. State (theta, theta_dot) with theta = 0
// upright; input torque tau; running cost q^2 theta^2 + tau^2.
// ---------------------------------------------------------------------------

struct PendulumContext {
    double m = 1.0;        // mass
    double g = 10.0;       // gravity
    double l = 1.0;        // length
    double q = 1.0;        // position weight, torque units
    double tau_max = 5.0;  // torque bound

    double max_gravity_torque() const { return m * g * l; }
    double natural_frequency() const { return std::sqrt(g / l); }
    double inertia() const { return m * l * l; }

    /// (m g l, omega, q, tau_max) — the order used everywhere downstream.
    std::vector<double> context_vector() const;
};

std::array<double, 2> pendulum_derivative(const PendulumContext& ctx, double theta,
                                          double theta_dot, double tau);
double pendulum_cost_rate(const PendulumContext& ctx, double theta, double tau);
bool pendulum_feasible(const PendulumContext& ctx, double tau);

const ProblemSignature& pendulum_signature();

// ---------------------------------------------------------------------------
// Longitudinal car on a slippery surface. State (x, x_dot); input wheel
// slip s mapped to a traction ratio mu(s); ground reaction forces must stay
// nonnegative.
// ---------------------------------------------------------------------------

struct CarContext {
    double g = 9.8;    // gravity
    double l = 1.0;    // wheel base
    double x_c = 0.5;  // CG horizontal position
    double y_c = 0.5;  // CG height
    double q = 20.0;   // position weight, length units

    /// (g, l, x_c, y_c, q).
    std::vector<double> context_vector() const;
};

/// Traction ratio of the front wheel as a function of slip; odd, saturating
/// inside (-1, 1).
double car_mu(double s);

/// Longitudinal acceleration for a given slip.
double car_acceleration(const CarContext& ctx, double s);

std::array<double, 2> car_derivative(const CarContext& ctx, double x, double x_dot, double s);
double car_cost_rate(const CarContext& ctx, double x, double s);

/// Front and rear normal forces both nonnegative.
bool car_feasible(const CarContext& ctx, double s);

const ProblemSignature& car_signature();

// ---------------------------------------------------------------------------
// Model wrappers for the DP solver.
// ---------------------------------------------------------------------------

class PendulumModel : public DynamicsModel {
  public:
    explicit PendulumModel(PendulumContext ctx) : ctx_(ctx) {}

    std::size_t state_dim() const override { return 2; }
    std::size_t control_dim() const override { return 1; }
    void derivative(std::span<const double> x, std::span<const double> u,
                    std::span<double> dx) const override;
    double cost_rate(std::span<const double> x, std::span<const double> u) const override;
    bool feasible(std::span<const double> x, std::span<const double> u) const override;
    const ProblemSignature& signature() const override { return pendulum_signature(); }
    std::vector<double> context_vector() const override { return ctx_.context_vector(); }

    const PendulumContext& context() const { return ctx_; }

  private:
    PendulumContext ctx_;
};

class CarModel : public DynamicsModel {
  public:
    explicit CarModel(CarContext ctx) : ctx_(ctx) {}

    std::size_t state_dim() const override { return 2; }
    std::size_t control_dim() const override { return 1; }
    void derivative(std::span<const double> x, std::span<const double> u,
                    std::span<double> dx) const override;
    double cost_rate(std::span<const double> x, std::span<const double> u) const override;
    bool feasible(std::span<const double> x, std::span<const double> u) const override;
    const ProblemSignature& signature() const override { return car_signature(); }
    std::vector<double> context_vector() const override { return ctx_.context_vector(); }

    const CarContext& context() const { return ctx_; }

  private:
    CarContext ctx_;
};

// ---------------------------------------------------------------------------
// Benchmark context tables: nine instances per system, grouped in three
// dimensionally similar triplets (a,b,c), (d,e,f), (g,h,i).
// ---------------------------------------------------------------------------

struct PendulumContextEntry {
    std::string name;
    PendulumContext context;
};

struct CarContextEntry {
    std::string name;
    CarContext context;
};

std::span<const PendulumContextEntry> pendulum_context_table();
std::span<const CarContextEntry> car_context_table();

/// Lookup by short name such as "c_a"; throws Error when absent.
const PendulumContext& pendulum_table_context(std::string_view name);
const CarContext& car_table_context(std::string_view name);

// ---------------------------------------------------------------------------
// DP problem construction. Domain bounds, time step, horizon, capture box
// and terminal costs are fixed in dimensionless form so that similar
// contexts produce exactly corresponding discrete problems.
// ---------------------------------------------------------------------------

/// Reference time steps: 0.025 s expressed at the unit-length table contexts.
inline const double kPendulumDtStar = 0.025 * std::sqrt(10.0);
inline const double kCarDtStar = 0.025 * std::sqrt(9.8);

inline const double kPendulumHorizonStar = 20.0 * 2.0 * M_PI;  // twenty periods
inline const double kCarHorizonStar = 50.0;

inline constexpr double kCarSlipMax = 0.2;  // covers the full traction envelope

struct BenchmarkDpSettings {
    std::size_t grid_points = 501;
    std::size_t control_points = 101;
    double dt_star = 0.0;       // 0 = per-system default
    double horizon_star = 0.0;  // 0 = per-system default
    double capture_tol_star = 0.05;
    double oob_cost_star = 1.0e4;
    unsigned threads = 0;
};

DPConfig pendulum_dp_config(const PendulumContext& ctx, const BenchmarkDpSettings& s = {});
DPConfig car_dp_config(const CarContext& ctx, const BenchmarkDpSettings& s = {});

ScalingTransforms pendulum_transforms(const PendulumContext& ctx);
ScalingTransforms car_transforms(const CarContext& ctx);

// ---------------------------------------------------------------------------
// Computed-torque task parameters (used by the analytic module).
// ---------------------------------------------------------------------------

struct CtTask {
    double omega_d = 1.0;  // desired closed-loop frequency
    double zeta = 1.0;     // desired closed-loop damping
};

}  // namespace dimpol
