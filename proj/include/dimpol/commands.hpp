#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace dimpol {

/// Process exit codes shared by all subcommands.
enum ExitCode : int {
    kExitOk = 0,
    kExitParse = 2,
    kExitSolver = 3,
    kExitNotSimilar = 4,
    kExitAssertion = 5,
};

struct SolveArgs {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::size_t> grid;
    std::optional<std::size_t> controls;
    unsigned threads = 0;
};

struct TransferArgs {
    std::string src_path;
    std::optional<std::string> context_name;  // target picked from the context table
    std::optional<std::string> config_path;   // or spelled out in a config file
    std::string out;
    bool force = false;
};

struct CompareArgs {
    std::string path_a;
    std::string path_b;
    bool dimensionless = false;
    double boundary_margin = 0.05;
    bool assert_thresholds = false;
    std::optional<std::string> report_out;
};

struct SweepArgs {
    std::string out;
    std::size_t grid = 251;
    std::size_t controls = 51;
    unsigned threads = 0;
};

struct AnalyticCheckArgs {};

int cmd_solve(const SolveArgs& args);
int cmd_transfer(const TransferArgs& args);
int cmd_compare(const CompareArgs& args);
int cmd_sweep(const SweepArgs& args);
int cmd_analytic_check(const AnalyticCheckArgs& args);

/// Acceptance thresholds used by compare --assert: at least this fraction of
/// nodes within two control-resolution steps, and a mean deviation below
/// half a step.
inline constexpr double kCompareFractionMin = 0.95;
inline constexpr double kCompareWithinSteps = 2.0;
inline constexpr double kCompareMeanSteps = 0.5;

}  // namespace dimpol
