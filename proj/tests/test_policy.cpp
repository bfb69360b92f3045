#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dimpol/analytic.hpp"
#include "dimpol/policy.hpp"
#include "dimpol/systems.hpp"

using namespace dimpol;

namespace {

// Tabulates u(x0, x1) = f(x0, x1) on the given axes.
template <typename F>
TabularPolicy tabulate(std::vector<GridAxis> axes, F f, Interp interp = Interp::multilinear,
                       OobPolicy oob = OobPolicy::clamp, ContextMeta meta = {}) {
    std::vector<double> values;
    values.reserve(axes[0].count * axes[1].count);
    for (std::size_t i = 0; i < axes[0].count; ++i)
        for (std::size_t j = 0; j < axes[1].count; ++j)
            values.push_back(f(axes[0].value(i), axes[1].value(j)));
    return TabularPolicy(std::move(axes), 1, std::move(values), interp, oob, std::move(meta));
}

TabularPolicy pendulum_like_table(const PendulumContext& ctx) {
    const double omega = ctx.natural_frequency();
    ContextMeta meta;
    meta.system = "pendulum";
    const auto st = pendulum_transforms(ctx);
    meta.context = st.context;
    meta.context_star = st.context_star;
    return tabulate({{"theta", -M_PI, M_PI, 11}, {"theta_dot", -M_PI * omega, M_PI * omega, 11}},
                    [&](double th, double thd) { return -(2.0 * th + 0.7 * thd); },
                    Interp::multilinear, OobPolicy::clamp, meta);
}

}  // namespace

TEST_CASE("construction validates the grid") {
    ContextMeta meta;
    try {
        TabularPolicy({{"a", 0.0, 1.0, 1}, {"b", 0.0, 1.0, 3}}, 1, std::vector<double>(3, 0.0),
                      Interp::nearest, OobPolicy::clamp, meta);
        FAIL("expected an error for a one-point axis");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("grid count must be >= 2") != std::string::npos);
    }
    CHECK_THROWS_AS(
        TabularPolicy({{"a", 1.0, 0.0, 2}, {"b", 0.0, 1.0, 3}}, 1,
                      std::vector<double>(6, 0.0), Interp::nearest, OobPolicy::clamp, meta),
        Error);
    CHECK_THROWS_AS(
        TabularPolicy({{"a", 0.0, 1.0, 2}, {"b", 0.0, 1.0, 3}}, 1,
                      std::vector<double>(5, 0.0), Interp::nearest, OobPolicy::clamp, meta),
        Error);
}

TEST_CASE("grid-node queries read stored values exactly") {
    auto table = tabulate({{"a", -1.0, 1.0, 9}, {"b", -2.0, 2.0, 7}},
                          [](double a, double b) { return 3.0 * a - b + 0.25; });
    for (std::size_t i = 0; i < 9; ++i) {
        for (std::size_t j = 0; j < 7; ++j) {
            const std::array<double, 2> x{table.axes()[0].value(i), table.axes()[1].value(j)};
            const std::array<std::size_t, 2> idx{i, j};
            CHECK(table.evaluate(x)[0] == table.node_value(table.flat_index(idx))[0]);
        }
    }
}

TEST_CASE("multilinear interpolation reproduces linear fields") {
    auto table = tabulate({{"a", 0.0, 4.0, 5}, {"b", 0.0, 2.0, 3}},
                          [](double a, double b) { return a + 0.5 * b; });
    const std::array<double, 2> center{0.5, 0.5};  // cell center
    CHECK(table.evaluate(center)[0] == doctest::Approx(0.75).epsilon(1e-15));
    const std::array<double, 2> off{1.3, 0.9};
    CHECK(table.evaluate(off)[0] == doctest::Approx(1.3 + 0.45).epsilon(1e-13));
}

TEST_CASE("out-of-box queries clamp or throw") {
    auto table = tabulate({{"a", 0.0, 1.0, 3}, {"b", 0.0, 1.0, 3}},
                          [](double a, double b) { return a + b; });
    const std::array<double, 2> outside{2.0, 0.5};
    CHECK(table.evaluate(outside)[0] == doctest::Approx(1.5).epsilon(1e-15));

    auto strict = tabulate({{"a", 0.0, 1.0, 3}, {"b", 0.0, 1.0, 3}},
                           [](double a, double b) { return a + b; }, Interp::multilinear,
                           OobPolicy::error);
    CHECK_THROWS_AS(strict.evaluate(outside), OutOfDomain);
    const std::array<double, 2> nan_query{std::nan(""), 0.0};
    CHECK_THROWS_AS(table.evaluate(nan_query), OutOfDomain);
}

TEST_CASE("nearest mode rounds to the closest node") {
    auto table = tabulate({{"a", 0.0, 1.0, 3}, {"b", 0.0, 1.0, 3}},
                          [](double a, double b) { return 10.0 * a + b; }, Interp::nearest);
    const std::array<double, 2> x{0.26, 0.74};
    // nearest nodes: a = 0.5, b = 0.5 -> hmm 0.74 rounds to 0.5? cell 1 frac 0.48 -> 0.5
    CHECK(table.evaluate(x)[0] == doctest::Approx(10.0 * 0.5 + 0.5).epsilon(1e-12));
}

TEST_CASE("to_dimensionless scales axes and values") {
    const PendulumContext c_a = pendulum_table_context("c_a");
    const auto st = pendulum_transforms(c_a);
    const auto table = pendulum_like_table(c_a);

    const auto fstar = to_dimensionless(table, st);
    CHECK(fstar.table.meta().dimensionless);
    CHECK(fstar.table.axes()[0].lo == doctest::Approx(-M_PI).epsilon(1e-15));
    CHECK(fstar.table.axes()[1].lo == doctest::Approx(-M_PI).epsilon(1e-13));
    CHECK(fstar.table.axes()[1].hi == doctest::Approx(M_PI).epsilon(1e-13));

    // Values divide by the gravity torque scale (x10 -> x0.1).
    const std::array<std::size_t, 2> corner{0, 0};
    CHECK(fstar.table.node_value(fstar.table.flat_index(corner))[0] ==
          doctest::Approx(table.node_value(table.flat_index(corner))[0] / 10.0)
              .epsilon(1e-15));
}

TEST_CASE("identity transforms leave the table unchanged") {
    PendulumContext unit;
    unit.m = 1.0;
    unit.g = 1.0;
    unit.l = 1.0;
    unit.q = 0.5;
    unit.tau_max = 2.0;
    const auto table = pendulum_like_table(unit);
    const auto fstar = to_dimensionless(table, pendulum_transforms(unit));
    CHECK(fstar.table.values() == table.values());
    CHECK(fstar.table.axes()[1].hi == table.axes()[1].hi);
}

TEST_CASE("round trip through the dimensionless form is tight") {
    const PendulumContext c_b = pendulum_table_context("c_b");
    const auto st = pendulum_transforms(c_b);
    const auto table = pendulum_like_table(c_b);

    const auto back = from_dimensionless(to_dimensionless(table, st), st);
    REQUIRE(back.values().size() == table.values().size());
    for (std::size_t i = 0; i < table.values().size(); ++i)
        CHECK(back.values()[i] ==
              doctest::Approx(table.values()[i]).epsilon(1e-12).scale(1.0));
    for (std::size_t ax = 0; ax < 2; ++ax) {
        CHECK(back.axes()[ax].lo == doctest::Approx(table.axes()[ax].lo).epsilon(1e-12));
        CHECK(back.axes()[ax].hi == doctest::Approx(table.axes()[ax].hi).epsilon(1e-12));
    }
    CHECK_FALSE(back.meta().approximate);
}

TEST_CASE("from_dimensionless rejects dissimilar targets unless forced") {
    const PendulumContext c_a = pendulum_table_context("c_a");
    const PendulumContext c_g = pendulum_table_context("c_g");
    const auto fstar = to_dimensionless(pendulum_like_table(c_a), pendulum_transforms(c_a));

    CHECK_THROWS_AS(from_dimensionless(fstar, pendulum_transforms(c_g)), NotSimilar);
    const auto forced = from_dimensionless(fstar, pendulum_transforms(c_g), /*force=*/true);
    CHECK(forced.meta().approximate);
}

TEST_CASE("re-dimensionalizing at a similar context rescales as expected") {
    const PendulumContext c_a = pendulum_table_context("c_a");
    const PendulumContext c_b = pendulum_table_context("c_b");
    const auto table_a = pendulum_like_table(c_a);
    const auto fstar = to_dimensionless(table_a, pendulum_transforms(c_a));
    const auto table_b = from_dimensionless(fstar, pendulum_transforms(c_b));

    const double omega_b = c_b.natural_frequency();
    CHECK(table_b.axes()[1].hi == doctest::Approx(M_PI * omega_b).epsilon(1e-12));
    // Output scale G_b / G_a = 2.
    const std::array<std::size_t, 2> corner{0, 0};
    CHECK(table_b.node_value(table_b.flat_index(corner))[0] ==
          doctest::Approx(2.0 * table_a.node_value(table_a.flat_index(corner))[0])
              .epsilon(1e-12));
}

TEST_CASE("transfer composes the two scalings and keeps similarity") {
    const PendulumContext c_a = pendulum_table_context("c_a");
    const PendulumContext c_b = pendulum_table_context("c_b");
    const auto st_a = pendulum_transforms(c_a);
    const auto st_b = pendulum_transforms(c_b);
    const auto table_a = pendulum_like_table(c_a);

    const auto table_b = transfer(table_a, st_a, st_b);

    // Equivalent to the two-step path.
    const auto two_step = from_dimensionless(to_dimensionless(table_a, st_a), st_b);
    for (std::size_t i = 0; i < table_b.values().size(); ++i)
        CHECK(table_b.values()[i] ==
              doctest::Approx(two_step.values()[i]).epsilon(1e-13).scale(1.0));

    // f_b(theta, theta_dot) = 2 f_a(theta, sqrt(2) theta_dot) on this block.
    const std::array<double, 2> x{0.4, 0.9};
    const std::array<double, 2> x_scaled{0.4, std::sqrt(2.0) * 0.9};
    CHECK(table_b.evaluate(x)[0] ==
          doctest::Approx(2.0 * table_a.evaluate(x_scaled)[0]).epsilon(1e-12));

    CHECK_THROWS_AS(
        transfer(table_a, st_a, pendulum_transforms(pendulum_table_context("c_g"))),
        NotSimilar);
}

TEST_CASE("identity transfer is bit-identical") {
    const PendulumContext c_a = pendulum_table_context("c_a");
    const auto st = pendulum_transforms(c_a);
    const auto table = pendulum_like_table(c_a);
    const auto same = transfer(table, st, st);
    CHECK(same.values() == table.values());
    CHECK(same.axes()[0].lo == table.axes()[0].lo);
    CHECK(same.axes()[1].hi == table.axes()[1].hi);
}

TEST_CASE("transfer there and back returns the original table") {
    const PendulumContext c_a = pendulum_table_context("c_a");
    const PendulumContext c_c = pendulum_table_context("c_c");
    const auto st_a = pendulum_transforms(c_a);
    const auto st_c = pendulum_transforms(c_c);
    const auto table = pendulum_like_table(c_a);

    const auto back = transfer(transfer(table, st_a, st_c), st_c, st_a);
    for (std::size_t i = 0; i < table.values().size(); ++i)
        CHECK(back.values()[i] ==
              doctest::Approx(table.values()[i]).epsilon(1e-12).scale(1.0));
    CHECK(back.axes()[1].hi == doctest::Approx(table.axes()[1].hi).epsilon(1e-12));
}

TEST_CASE("transfer maps a discrete control set with selection preserved") {
    const PendulumContext c_a = pendulum_table_context("c_a");
    const PendulumContext c_b = pendulum_table_context("c_b");

    // Values restricted to a five-element control set.
    const std::vector<double> control_set{-5.0, -2.5, 0.0, 2.5, 5.0};
    ContextMeta meta;
    meta.system = "pendulum";
    const auto st_a = pendulum_transforms(c_a);
    meta.context = st_a.context;
    meta.context_star = st_a.context_star;
    const double omega = c_a.natural_frequency();
    std::vector<std::size_t> picks;
    auto table = tabulate(
        {{"theta", -M_PI, M_PI, 9}, {"theta_dot", -M_PI * omega, M_PI * omega, 9}},
        [&](double th, double thd) {
            const std::size_t pick =
                static_cast<std::size_t>(std::fmod(std::abs(1e3 * (th + 2.0 * thd)), 5.0));
            picks.push_back(pick);
            return control_set[pick];
        },
        Interp::nearest, OobPolicy::clamp, meta);

    const auto table_b = transfer(table, st_a, pendulum_transforms(c_b));
    const double scale = 2.0;  // G_b / G_a
    // theta_dot axis keeps its orientation, so node ordering is unchanged.
    for (std::size_t node = 0; node < table.node_count(); ++node) {
        const double sent = table_b.values()[node];
        const double expected = control_set[picks[node]] * scale;
        CHECK(sent == doctest::Approx(expected).epsilon(1e-14).scale(1.0));
    }
}

TEST_CASE("resample agrees with direct evaluation") {
    auto table = tabulate({{"a", 0.0, 4.0, 9}, {"b", 0.0, 2.0, 9}},
                          [](double a, double b) { return a * a - b; });
    const std::vector<GridAxis> target{{"a", 0.5, 3.5, 5}, {"b", 0.2, 1.8, 5}};
    const auto resampled = resample(table, target);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            const std::array<double, 2> x{target[0].value(i), target[1].value(j)};
            const std::array<std::size_t, 2> idx{i, j};
            CHECK(resampled.node_value(resampled.flat_index(idx))[0] ==
                  doctest::Approx(table.evaluate(x)[0]).epsilon(1e-14));
        }
    }
}

TEST_CASE("compare_tables reports zero against itself and excludes the margin") {
    auto table = tabulate({{"a", 0.0, 1.0, 21}, {"b", 0.0, 1.0, 21}},
                          [](double a, double b) { return std::sin(3 * a) + b; });
    const auto cmp = compare_tables(table, table, 0.05, 0.01);
    CHECK(cmp.max_abs_dev == 0.0);
    CHECK(cmp.mean_abs_dev == 0.0);
    CHECK(cmp.fraction_within == 1.0);
    CHECK(cmp.compared_nodes == 19 * 19);  // one node shaved per side
}

TEST_CASE("analytic transfer of the lqr law matches the tabular path") {
    const PendulumContext c_a = pendulum_table_context("c_a");
    const PendulumContext c_b = pendulum_table_context("c_b");
    const auto sol_a = lqr_gains(c_a.max_gravity_torque(), c_a.inertia(), c_a.q);
    const auto sol_b = lqr_gains(c_b.max_gravity_torque(), c_b.inertia(), c_b.q);

    ContextMeta meta;
    meta.system = "pendulum";
    const auto st_a = pendulum_transforms(c_a);
    meta.context = st_a.context;
    meta.context_star = st_a.context_star;
    const double omega_a = c_a.natural_frequency();
    const auto table_a = tabulate(
        {{"theta", -M_PI, M_PI, 41}, {"theta_dot", -M_PI * omega_a, M_PI * omega_a, 41}},
        [&](double th, double thd) { return sol_a.eval(th, thd); }, Interp::multilinear,
        OobPolicy::clamp, meta);

    const auto table_b = transfer(table_a, st_a, pendulum_transforms(c_b));
    // Direct substitution of the b context evaluated at the transferred nodes.
    for (std::size_t i = 0; i < table_b.axes()[0].count; i += 5) {
        for (std::size_t j = 0; j < table_b.axes()[1].count; j += 5) {
            const double th = table_b.axes()[0].value(i);
            const double thd = table_b.axes()[1].value(j);
            const std::array<std::size_t, 2> idx{i, j};
            const double direct = sol_b.eval(th, thd);
            CHECK(table_b.node_value(table_b.flat_index(idx))[0] ==
                  doctest::Approx(direct).epsilon(1e-12));
        }
    }
}
