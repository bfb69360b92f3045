#include <CLI11.hpp>

#include "dimpol/commands.hpp"
#include "dimpol/version.hpp"

int main(int argc, char** argv) {
    using namespace dimpol;

    CLI::App app{"dimensionless motion-control policies: solve, transfer, compare"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "solve a benchmark by grid value iteration");
    solve->add_option("--config", solve_args.config_path, "run configuration file")
        ->required();
    std::string solve_out;
    std::size_t solve_grid = 0, solve_controls = 0;
    solve->add_option("--out", solve_out, "policy output path");
    solve->add_option("--grid", solve_grid, "grid points per state axis");
    solve->add_option("--controls", solve_controls, "control discretization count");
    solve->add_option("--threads", solve_args.threads, "worker threads (0 = auto)");

    TransferArgs transfer_args;
    auto* transfer =
        app.add_subcommand("transfer", "rescale a solved policy to a similar context");
    transfer->add_option("src", transfer_args.src_path, "source policy file")->required();
    std::string transfer_context, transfer_config;
    transfer->add_option("--context", transfer_context, "target context table name");
    transfer->add_option("--config", transfer_config, "target context config file");
    transfer->add_option("--out", transfer_args.out, "output policy path")->required();
    transfer->add_flag("--force", transfer_args.force,
                       "allow dissimilar contexts (tags the result approximate)");

    CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "measure deviation between two policies");
    compare->add_option("a", compare_args.path_a, "reference policy file")->required();
    compare->add_option("b", compare_args.path_b, "policy file to compare")->required();
    compare->add_flag("--dimensionless", compare_args.dimensionless,
                      "compare in dimensionless form");
    compare->add_option("--boundary-margin", compare_args.boundary_margin,
                        "fraction of each axis span excluded at the domain edge");
    compare->add_flag("--assert", compare_args.assert_thresholds,
                      "exit nonzero when deviation thresholds are violated");
    std::string compare_out;
    compare->add_option("--out", compare_out, "report CSV path");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "regime sweep over the dimensionless task plane");
    sweep->add_option("--out", sweep_args.out, "sweep CSV path")->required();
    sweep->add_option("--grid", sweep_args.grid, "grid points per state axis");
    sweep->add_option("--controls", sweep_args.controls, "control discretization count");
    sweep->add_option("--threads", sweep_args.threads, "worker threads (0 = auto)");

    AnalyticCheckArgs analytic_args;
    auto* analytic =
        app.add_subcommand("analytic-check", "verify closed-form solutions and their transfer");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : kExitParse;
    }

    if (solve->parsed()) {
        if (!solve_out.empty()) solve_args.out = solve_out;
        if (solve_grid) solve_args.grid = solve_grid;
        if (solve_controls) solve_args.controls = solve_controls;
        return cmd_solve(solve_args);
    }
    if (transfer->parsed()) {
        if (!transfer_context.empty()) transfer_args.context_name = transfer_context;
        if (!transfer_config.empty()) transfer_args.config_path = transfer_config;
        return cmd_transfer(transfer_args);
    }
    if (compare->parsed()) {
        if (!compare_out.empty()) compare_args.report_out = compare_out;
        return cmd_compare(compare_args);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (analytic->parsed()) return cmd_analytic_check(analytic_args);
    return kExitParse;
}
