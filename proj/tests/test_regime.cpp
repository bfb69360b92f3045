#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dimpol/regime.hpp"
#include "dimpol/solver.hpp"
#include "dimpol/systems.hpp"

using namespace dimpol;

namespace {

DimensionlessPolicy solve_dimensionless(const PendulumContext& ctx, std::size_t grid,
                                        std::size_t controls) {
    BenchmarkDpSettings s;
    s.grid_points = grid;
    s.control_points = controls;
    const PendulumModel model(ctx);
    const auto result = solve(pendulum_dp_config(ctx, s), model);
    return to_dimensionless(result.policy, pendulum_transforms(ctx));
}

DimensionlessPolicy constant_table(double value) {
    std::vector<GridAxis> axes{{"theta", -2.0 * M_PI, 2.0 * M_PI, 11},
                               {"theta_dot", -M_PI, M_PI, 11}};
    ContextMeta meta;
    meta.system = "pendulum";
    meta.dimensionless = true;
    return DimensionlessPolicy{TabularPolicy(
        axes, 1, std::vector<double>(11 * 11, value), Interp::nearest, OobPolicy::clamp, meta)};
}

}  // namespace

TEST_CASE("classification thresholds are closed") {
    CHECK(classify(0.05) == Regime::bang_bang);
    CHECK(classify(0.1) == Regime::bang_bang);
    CHECK(classify(0.11) == Regime::transition);
    CHECK(classify(1.0) == Regime::transition);
    CHECK(classify(9.9) == Regime::transition);
    CHECK(classify(10.0) == Regime::unconstrained);
    CHECK(classify(50.0) == Regime::unconstrained);
    CHECK_THROWS_AS(classify(0.0), Error);

    // Monotone step function: never jumps back down the ordering.
    auto rank = [](Regime r) {
        return r == Regime::bang_bang ? 0 : r == Regime::transition ? 1 : 2;
    };
    int prev = 0;
    for (double r = 0.01; r < 100.0; r *= 1.37) {
        const int now = rank(classify(r));
        CHECK(now >= prev);
        prev = now;
    }
}

TEST_CASE("saturation fraction counting") {
    std::vector<double> zeros(10, 0.0);
    CHECK(saturation_fraction(zeros, 0.5) == 0.0);

    std::vector<double> pinned(10, 0.5);
    CHECK(saturation_fraction(pinned, 0.5) == 1.0);

    std::vector<double> mixed{0.5, -0.5, 0.49, 0.0, -0.4999};
    // 1e-3 tolerance: |v| >= 0.4995 counts.
    CHECK(saturation_fraction(mixed, 0.5) == doctest::Approx(0.6));
    CHECK_THROWS_AS(saturation_fraction(mixed, 0.0), Error);
}

TEST_CASE("slices of a constant table are constant") {
    const auto table = constant_table(0.37);
    const auto slice = slice_policy(table, 0.5);
    CHECK(slice.positions.size() == 11);
    for (double v : slice.values) CHECK(v == 0.37);

    const auto windowed = slice_policy(table, 0.0, -M_PI, M_PI);
    CHECK(windowed.positions.front() >= -M_PI - 1e-12);
    CHECK(windowed.positions.back() <= M_PI + 1e-12);
    CHECK(windowed.positions.size() < slice.positions.size());

    CHECK_THROWS_AS(slice_policy(table, 7.0), OutOfDomain);
    CHECK_THROWS_AS(slice_policy(table, 0.0, -10.0, 10.0), OutOfDomain);
}

TEST_CASE("grid-line slices of a nearest table reproduce the stored row") {
    std::vector<GridAxis> axes{{"theta", -1.0, 1.0, 5}, {"theta_dot", -1.0, 1.0, 5}};
    std::vector<double> values;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) values.push_back(10.0 * i + j);
    ContextMeta meta;
    meta.dimensionless = true;
    const DimensionlessPolicy table{
        TabularPolicy(axes, 1, values, Interp::nearest, OobPolicy::clamp, meta)};

    const auto slice = slice_policy(table, axes[1].value(3));
    REQUIRE(slice.values.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(slice.values[i] == values[i * 5 + 3]);
}

TEST_CASE("relaxed similarity by regime") {
    auto transforms = [](double q_star, double tau_max_star) {
        PendulumContext ctx;
        ctx.m = 1.0;
        ctx.g = 10.0;
        ctx.l = 1.0;
        ctx.q = q_star * 10.0;
        ctx.tau_max = tau_max_star * 10.0;
        return pendulum_transforms(ctx);
    };

    // Both unconstrained, equal q*: tau_max* may differ.
    CHECK(regime_relaxed_similarity(transforms(0.1, 2.0), transforms(0.1, 4.0)));
    // Both bang-bang, equal tau_max*: q* may differ.
    CHECK(regime_relaxed_similarity(transforms(30.0, 1.0), transforms(60.0, 1.0)));
    // Fully similar contexts always pass.
    CHECK(regime_relaxed_similarity(transforms(0.5, 0.5), transforms(0.5, 0.5)));
    // Transition regime requires full similarity.
    CHECK_FALSE(regime_relaxed_similarity(transforms(0.5, 0.5), transforms(0.5, 0.6)));
    // Mismatched regimes never relax.
    CHECK_FALSE(regime_relaxed_similarity(transforms(0.1, 2.0), transforms(30.0, 2.0)));

    const auto car_st = car_transforms(car_table_context("c_a"));
    CHECK_THROWS_AS(regime_relaxed_similarity(car_st, car_st), SignatureMismatch);
}

TEST_CASE("default sweep points cover both figure ranges") {
    const auto points = default_sweep_points();
    CHECK(points.size() == 8);
    bool has_low_tau = false, has_high_tau = false, has_low_q = false, has_high_q = false;
    for (const auto& p : points) {
        if (p.q_star == 0.5 && p.tau_max_star == 0.1) has_low_tau = true;
        if (p.q_star == 0.5 && p.tau_max_star == 5.0) has_high_tau = true;
        if (p.tau_max_star == 0.5 && p.q_star == 0.05) has_low_q = true;
        if (p.tau_max_star == 0.5 && p.q_star == 2.0) has_high_q = true;
    }
    CHECK(has_low_tau);
    CHECK(has_high_tau);
    CHECK(has_low_q);
    CHECK(has_high_q);
}

TEST_CASE("solved bang-bang context saturates its zero-velocity slice") {
    // q* = 10, tau_max* = 1 -> R* = 0.1: position errors dominate the cost,
    // so the policy rides the torque bound almost everywhere, both across the
    // central window and across the whole axis.
    const PendulumContext c_g = pendulum_table_context("c_g");
    const auto fstar = solve_dimensionless(c_g, 101, 31);

    const auto central = slice_policy(fstar, 0.0, -M_PI, M_PI);
    CHECK(saturation_fraction(central.values, 1.0) > 0.9);

    const auto report = regime_report(fstar, 10.0, 1.0);
    CHECK(report.classification == Regime::bang_bang);
    CHECK(report.saturation_fraction > 0.9);
}

TEST_CASE("solved transition context saturates only part of its slice") {
    const PendulumContext c_a = pendulum_table_context("c_a");
    const auto fstar = solve_dimensionless(c_a, 101, 31);
    const auto report = regime_report(fstar, 0.1, 0.5);
    CHECK(report.classification == Regime::transition);
    CHECK(report.saturation_fraction > 0.05);
    CHECK(report.saturation_fraction < 0.95);
}
