#include "dimpol/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dimpol/analytic.hpp"
#include "dimpol/config.hpp"
#include "dimpol/errors.hpp"
#include "dimpol/policy_io.hpp"
#include "dimpol/regime.hpp"
#include "dimpol/solver.hpp"
#include "dimpol/systems.hpp"

namespace dimpol {

namespace {

std::string star_str(const std::vector<double>& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
    return os.str();
}

std::filesystem::path with_suffix(const std::filesystem::path& path, const char* suffix) {
    std::filesystem::path p = path;
    const std::string stem = p.stem().string();
    const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
    p.replace_filename(stem + suffix + ext);
    return p;
}

ScalingTransforms transforms_from_meta(const ContextMeta& meta) {
    if (meta.system == "pendulum")
        return transforms_for(pendulum_signature(), meta.context);
    if (meta.system == "car") return transforms_for(car_signature(), meta.context);
    throw ParseError("unknown system '" + meta.system + "' in policy file");
}

}  // namespace

int cmd_solve(const SolveArgs& args) {
    RunConfig cfg;
    std::string out;
    try {
        cfg = RunConfig::parse_file(args.config_path);
        if (args.grid) cfg.grid = *args.grid;
        if (args.controls) cfg.controls = *args.controls;
        cfg.validate();
        if (args.out)
            out = *args.out;
        else if (cfg.out)
            out = *cfg.out;
        else
            throw ParseError("no output path: set 'out' in the config or pass --out");
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }

    try {
        BenchmarkDpSettings settings = cfg.dp_settings();
        settings.threads = args.threads;

        ValueIterationResult result = [&] {
            if (cfg.is_pendulum()) {
                const PendulumContext ctx = cfg.pendulum_context();
                return solve(pendulum_dp_config(ctx, settings), PendulumModel(ctx));
            }
            const CarContext ctx = cfg.car_context();
            return solve(car_dp_config(ctx, settings), CarModel(ctx));
        }();

        PolicyFileData data{result.policy};
        data.control_lo = result.config.control_set.front()[0];
        data.control_hi = result.config.control_set.back()[0];
        data.control_count = result.config.control_set.size();

        write_policy_file(out, data);
        write_field_file(with_suffix(out, "_cost"), result.config.state_grid,
                         result.cost_to_go, "j", result.policy.meta());
        write_residual_file(with_suffix(out, "_residual"), result.residual_history);

        std::cout << "solved " << cfg.system << " on " << cfg.grid << "x" << cfg.grid
                  << " grid, " << cfg.controls << " controls, " << result.config.steps
                  << " iterations; c* = " << star_str(result.policy.meta().context_star)
                  << "\n";
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int cmd_transfer(const TransferArgs& args) {
    try {
        const PolicyFileData src = read_policy_file(args.src_path);
        const ScalingTransforms st_src = transforms_from_meta(src.policy.meta());

        ScalingTransforms st_dst = [&] {
            if (args.config_path) {
                const RunConfig cfg = RunConfig::parse_file(*args.config_path);
                if (cfg.system != src.policy.meta().system)
                    throw ParseError("target system '" + cfg.system +
                                     "' does not match the source policy");
                if (cfg.is_pendulum()) return pendulum_transforms(cfg.pendulum_context());
                return car_transforms(cfg.car_context());
            }
            if (!args.context_name)
                throw ParseError("no target context: pass --context NAME or --config PATH");
            if (src.policy.meta().system == "pendulum")
                return pendulum_transforms(pendulum_table_context(*args.context_name));
            return car_transforms(car_table_context(*args.context_name));
        }();

        TabularPolicy transferred = [&] {
            try {
                if (args.force) {
                    auto fstar = to_dimensionless(src.policy, st_src);
                    return from_dimensionless(fstar, st_dst, /*force=*/true);
                }
                return transfer(src.policy, st_src, st_dst);
            } catch (const NotSimilar&) {
                throw NotSimilar("contexts are not dimensionally similar; source c* = " +
                                 star_str(src.policy.meta().context_star) +
                                 ", target c* = " + star_str(st_dst.context_star));
            }
        }();

        PolicyFileData out{std::move(transferred)};
        if (src.has_control_info()) {
            const double scale = st_src.t_u[0] / st_dst.t_u[0];
            out.control_lo = std::min(src.control_lo * scale, src.control_hi * scale);
            out.control_hi = std::max(src.control_lo * scale, src.control_hi * scale);
            out.control_count = src.control_count;
        }
        write_policy_file(args.out, out);
        std::cout << "transferred policy to c* = " << star_str(st_dst.context_star) << "\n";
        return kExitOk;
    } catch (const NotSimilar& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotSimilar;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int cmd_compare(const CompareArgs& args) {
    try {
        const PolicyFileData a = read_policy_file(args.path_a);
        const PolicyFileData b = read_policy_file(args.path_b);
        if (a.policy.meta().system != b.policy.meta().system)
            throw ParseError("policies belong to different systems");
        if (a.policy.state_dim() != b.policy.state_dim() ||
            a.policy.output_dim() != b.policy.output_dim())
            throw ParseError("policies have different table shapes");

        double resolution = 0.0;
        TabularPolicy ref = a.policy;
        TabularPolicy other = b.policy;
        if (args.dimensionless) {
            const auto st_a = transforms_from_meta(a.policy.meta());
            const auto st_b = transforms_from_meta(b.policy.meta());
            if (!a.policy.meta().dimensionless)
                ref = to_dimensionless(a.policy, st_a).table;
            if (!b.policy.meta().dimensionless)
                other = to_dimensionless(b.policy, st_b).table;
            if (a.has_control_info())
                resolution = (a.control_hi - a.control_lo) /
                             static_cast<double>(a.control_count - 1) * st_a.t_u[0];
        } else if (a.has_control_info()) {
            resolution =
                (a.control_hi - a.control_lo) / static_cast<double>(a.control_count - 1);
        }

        if (args.assert_thresholds && resolution <= 0.0)
            throw ParseError("--assert needs control resolution metadata in file A");

        const double band = kCompareWithinSteps * resolution;
        const auto cmp = compare_tables(ref, other, args.boundary_margin, band);

        if (args.report_out) {
            std::ofstream os(*args.report_out, std::ios::trunc);
            if (!os) throw Error("cannot open '" + *args.report_out + "'");
            os << "metric,value\n";
            os << "max_abs_dev," << cmp.max_abs_dev << "\n";
            os << "mean_abs_dev," << cmp.mean_abs_dev << "\n";
            os << "fraction_within_band," << cmp.fraction_within << "\n";
            os << "band," << band << "\n";
            os << "control_resolution," << resolution << "\n";
            os << "compared_nodes," << cmp.compared_nodes << "\n";
            os << "boundary_margin," << args.boundary_margin << "\n";
        }

        bool pass = true;
        if (resolution > 0.0) {
            pass = cmp.fraction_within >= kCompareFractionMin &&
                   cmp.mean_abs_dev <= kCompareMeanSteps * resolution;
        }
        std::cout << "compare: max_abs=" << cmp.max_abs_dev
                  << " mean_abs=" << cmp.mean_abs_dev
                  << " fraction_within_band=" << cmp.fraction_within << " band=" << band
                  << " nodes=" << cmp.compared_nodes << (pass ? " [PASS]" : " [FAIL]")
                  << "\n";
        if (args.assert_thresholds && !pass) return kExitAssertion;
        return kExitOk;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int cmd_sweep(const SweepArgs& args) {
    try {
        BenchmarkDpSettings settings;
        settings.grid_points = args.grid;
        settings.control_points = args.controls;
        settings.threads = args.threads;

        const auto points = default_sweep_points();
        const auto rows = pendulum_regime_sweep(points, settings);

        std::ofstream os(args.out, std::ios::trunc);
        if (!os) throw Error("cannot open '" + args.out + "'");
        os << "label,q_star,tau_max_star,r_star,saturation_fraction,classification\n";
        for (const auto& row : rows) {
            os << row.point.label << "," << row.point.q_star << "," << row.point.tau_max_star
               << "," << row.report.r_star << "," << row.report.saturation_fraction << ","
               << regime_name(row.report.classification) << "\n";
            std::cout << row.point.label << " q*=" << row.point.q_star
                      << " tau_max*=" << row.point.tau_max_star
                      << " R*=" << row.report.r_star
                      << " saturation=" << row.report.saturation_fraction << " "
                      << regime_name(row.report.classification) << "\n";
        }
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int cmd_analytic_check(const AnalyticCheckArgs&) {
    bool all_pass = true;
    auto report = [&](const std::string& label, double value, double bound) {
        const bool pass = value <= bound;
        all_pass = all_pass && pass;
        std::cout << label << (pass ? ": PASS" : ": FAIL") << " (measured " << value << ")\n";
    };

    try {
        // Scaled transfer of the closed-form laws versus direct substitution,
        // across every similar pair of the benchmark table.
        double lqr_dev = 0.0;
        double ct_dev = 0.0;
        const char* blocks[3][3] = {
            {"c_a", "c_b", "c_c"}, {"c_d", "c_e", "c_f"}, {"c_g", "c_h", "c_i"}};
        for (const auto& block : blocks) {
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    if (i == j) continue;
                    const auto& ctx_a = pendulum_table_context(block[i]);
                    const auto& ctx_b = pendulum_table_context(block[j]);
                    lqr_dev = std::max(
                        lqr_dev, verify_transfer_analytic(AnalyticKind::lqr, ctx_a, ctx_b));
                    const CtTask task_a{0.8 * ctx_a.natural_frequency(), 0.7};
                    const CtTask task_b{0.8 * ctx_b.natural_frequency(), 0.7};
                    ct_dev = std::max(ct_dev,
                                      verify_transfer_analytic(AnalyticKind::computed_torque,
                                                               ctx_a, ctx_b, task_a, task_b));
                }
            }
        }
        report("LQR transfer max dev < 1e-12", lqr_dev, 1.0e-12);
        report("CT transfer max dev < 1e-12", ct_dev, 1.0e-12);

        // Closed-form gains against the optimality equation over a log-spaced
        // lattice of 1000 parameter triples.
        double worst_residual = 0.0;
        for (int i = 0; i < 10; ++i) {
            for (int j = 0; j < 10; ++j) {
                for (int k = 0; k < 10; ++k) {
                    const double G = std::pow(10.0, -2.0 + 5.0 * i / 9.0);
                    const double H = std::pow(10.0, -2.0 + 5.0 * j / 9.0);
                    const double q = std::pow(10.0, -2.0 + 5.0 * k / 9.0);
                    const auto sol = lqr_gains(G, H, q);
                    const auto S = sol.S();
                    double s_norm = 0.0;
                    for (double s : S) s_norm = std::max(s_norm, std::abs(s));
                    worst_residual =
                        std::max(worst_residual, riccati_residual(sol) / (1.0 + s_norm));
                }
            }
        }
        report("Riccati residual < 1e-9 relative over 1000 samples", worst_residual, 1.0e-9);

        // Dimensionless gain formula against nondimensionalized gains.
        double gain_dev = 0.0;
        for (double q_star : {0.01, 0.1, 1.0, 10.0}) {
            const double G = 3.7, H = 1.9;
            const double omega = std::sqrt(G / H);
            const auto sol = lqr_gains(G, H, q_star * G);
            const auto [k_theta, k_theta_dot] = lqr_dimensionless_gains(q_star);
            gain_dev = std::max(gain_dev, std::abs(sol.a / G - k_theta) / k_theta);
            gain_dev =
                std::max(gain_dev, std::abs(sol.b * omega / G - k_theta_dot) / k_theta_dot);
        }
        report("dimensionless LQR gains consistent < 1e-12", gain_dev, 1.0e-12);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return all_pass ? kExitOk : kExitAssertion;
}

}  // namespace dimpol
