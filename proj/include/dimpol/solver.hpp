#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dimpol/grid.hpp"
#include "dimpol/model.hpp"
#include "dimpol/policy.hpp"

namespace dimpol {

/// Axis-aligned capture box around the goal state.
struct TargetSpec {
    std::vector<double> point;
    std::vector<double> tol;
};

/// Grid dynamic-programming configuration. The horizon is a fixed iteration
/// count; target and out-of-bounds states absorb with the two terminal costs.
struct DPConfig {
    std::vector<GridAxis> state_grid;
    std::vector<std::vector<double>> control_set;  // admissible control vectors
    double dt = 0.0;
    std::size_t steps = 0;
    TargetSpec target;
    double oob_cost = 1.0e4;
    double target_cost = 0.0;
    unsigned threads = 0;  // 0 = hardware concurrency

    void validate(std::size_t state_dim, std::size_t control_dim) const;
};

/// One Jacobi sweep over all grid nodes. Also exposed standalone for tests.
struct BackupResult {
    std::vector<double> cost_to_go;
    std::vector<std::size_t> policy_index;  // argmin control per node
};

BackupResult bellman_backup(std::span<const double> cost_to_go, const DPConfig& cfg,
                            const DynamicsModel& model);

struct ValueIterationResult {
    std::vector<double> cost_to_go;
    TabularPolicy policy;
    std::vector<double> residual_history;  // per-iteration max |dJ|
    DPConfig config;
};

/// Runs cfg.steps backups from the terminal cost field and assembles the
/// argmin policy table with context metadata taken from the model.
ValueIterationResult solve(const DPConfig& cfg, const DynamicsModel& model);

enum class StopReason { target_captured, domain_exited, horizon_reached };

const char* stop_reason_name(StopReason r);

struct Rollout {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> controls;  // one fewer entry than states
    double accumulated_cost = 0.0;
    StopReason reason = StopReason::horizon_reached;
};

/// Forward-Euler simulation matching the DP transition discretization.
/// Stops on target capture or domain exit, whichever comes first.
Rollout rollout(const FeedbackLaw& f, const DynamicsModel& model, const DPConfig& cfg,
                std::span<const double> x0, double dt, double t_end);

}  // namespace dimpol
