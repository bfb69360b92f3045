#include "dimpol/regime.hpp"

#include <cmath>

#include "dimpol/errors.hpp"
#include "dimpol/solver.hpp"

namespace dimpol {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::bang_bang: return "bang_bang";
        case Regime::unconstrained: return "unconstrained";
        default: return "transition";
    }
}

PolicySlice slice_policy(const DimensionlessPolicy& fstar, double velocity_star,
                         std::optional<double> pos_lo, std::optional<double> pos_hi) {
    const auto& table = fstar.table;
    if (table.state_dim() != 2 || table.output_dim() != 1)
        throw Error("slices are defined for two-state, one-input tables");
    const GridAxis& pos_axis = table.axes()[0];
    const GridAxis& vel_axis = table.axes()[1];
    if (velocity_star < vel_axis.lo || velocity_star > vel_axis.hi)
        throw OutOfDomain("slice velocity outside the table domain");

    const double lo = pos_lo.value_or(pos_axis.lo);
    const double hi = pos_hi.value_or(pos_axis.hi);
    if (lo < pos_axis.lo - 1.0e-12 || hi > pos_axis.hi + 1.0e-12 || !(lo < hi))
        throw OutOfDomain("slice window outside the table domain");

    PolicySlice slice;
    for (std::size_t i = 0; i < pos_axis.count; ++i) {
        const double p = pos_axis.value(i);
        if (p < lo || p > hi) continue;
        slice.positions.push_back(p);
        const std::array<double, 2> x{p, velocity_star};
        slice.values.push_back(table.evaluate(x)[0]);
    }
    return slice;
}

double saturation_fraction(std::span<const double> values, double tau_max_star, double tol) {
    if (!(tau_max_star > 0.0)) throw Error("saturation bound must be positive");
    if (values.empty()) return 0.0;
    std::size_t saturated = 0;
    const double threshold = tau_max_star * (1.0 - tol);
    for (double v : values)
        if (std::abs(v) >= threshold) ++saturated;
    return static_cast<double>(saturated) / static_cast<double>(values.size());
}

Regime classify(double r_star) {
    if (!(r_star > 0.0)) throw Error("R* must be positive");
    if (r_star <= 0.1) return Regime::bang_bang;
    if (r_star >= 10.0) return Regime::unconstrained;
    return Regime::transition;
}

bool regime_relaxed_similarity(const ScalingTransforms& a, const ScalingTransforms& b) {
    if (a.signature_name != pendulum_signature().name ||
        b.signature_name != pendulum_signature().name)
        throw SignatureMismatch("regime relaxation is defined for the pendulum signature");
    if (is_similar(a, b, 1.0e-9)) return true;

    // context_star = (q*, tau_max*)
    const double q_a = a.context_star[0], t_a = a.context_star[1];
    const double q_b = b.context_star[0], t_b = b.context_star[1];
    const Regime r_a = classify(t_a / q_a);
    const Regime r_b = classify(t_b / q_b);
    if (r_a == Regime::unconstrained && r_b == Regime::unconstrained)
        return scalars_close(q_a, q_b, 1.0e-9);
    if (r_a == Regime::bang_bang && r_b == Regime::bang_bang)
        return scalars_close(t_a, t_b, 1.0e-9);
    return false;
}

RegimeReport regime_report(const DimensionlessPolicy& fstar, double q_star,
                           double tau_max_star) {
    RegimeReport report;
    report.r_star = tau_max_star / q_star;
    const auto slice = slice_policy(fstar, 0.0);
    report.saturation_fraction = saturation_fraction(slice.values, tau_max_star);
    report.classification = classify(report.r_star);
    return report;
}

std::vector<SweepPoint> default_sweep_points() {
    std::vector<SweepPoint> points;
    for (double t : {0.1, 0.5, 2.0, 5.0})
        points.push_back({"tau_sweep", 0.5, t});
    for (double q : {0.05, 0.2, 1.0, 2.0})
        points.push_back({"q_sweep", q, 0.5});
    return points;
}

std::vector<SweepRow> pendulum_regime_sweep(std::span<const SweepPoint> points,
                                            const BenchmarkDpSettings& settings) {
    std::vector<SweepRow> rows;
    rows.reserve(points.size());
    for (const auto& point : points) {
        // Base pendulum with m g l = 10; task parameters set the swept ratios.
        PendulumContext ctx;
        ctx.m = 1.0;
        ctx.g = 10.0;
        ctx.l = 1.0;
        ctx.q = point.q_star * ctx.max_gravity_torque();
        ctx.tau_max = point.tau_max_star * ctx.max_gravity_torque();

        const PendulumModel model(ctx);
        const auto result = solve(pendulum_dp_config(ctx, settings), model);
        const auto fstar = to_dimensionless(result.policy, pendulum_transforms(ctx));
        rows.push_back({point, regime_report(fstar, point.q_star, point.tau_max_star)});
    }
    return rows;
}

}  // namespace dimpol
