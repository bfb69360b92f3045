#include "dimpol/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <thread>

#include "dimpol/errors.hpp"

namespace dimpol {

void DPConfig::validate(std::size_t state_dim, std::size_t control_dim) const {
    if (state_grid.size() != state_dim)
        throw Error("state grid has " + std::to_string(state_grid.size()) +
                    " axes, the model expects " + std::to_string(state_dim));
    for (const auto& a : state_grid) {
        if (a.count < 2) throw Error("axis '" + a.name + "': grid count must be >= 2");
        if (!(a.lo < a.hi)) throw Error("axis '" + a.name + "': min must be below max");
    }
    if (!(dt > 0.0)) throw Error("time step must be positive");
    if (steps < 1) throw Error("iteration count must be >= 1");
    if (control_set.empty()) throw Error("control set must not be empty");
    for (const auto& u : control_set)
        if (u.size() != control_dim)
            throw Error("control vector dimension does not match the model");
    if (target.point.size() != state_dim || target.tol.size() != state_dim)
        throw Error("target point and tolerance must match the state dimension");
    if (!std::isfinite(oob_cost) || !std::isfinite(target_cost))
        throw Error("terminal costs must be finite");
}

namespace {

void parallel_for(std::size_t n, unsigned threads, const auto& body) {
    unsigned t = threads ? threads : std::thread::hardware_concurrency();
    if (t == 0) t = 1;
    t = static_cast<unsigned>(std::min<std::size_t>(t, n));
    if (t <= 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    const std::size_t chunk = (n + t - 1) / t;
    for (unsigned i = 0; i < t; ++i) {
        const std::size_t begin = std::min<std::size_t>(i * chunk, n);
        const std::size_t end = std::min<std::size_t>(begin + chunk, n);
        if (begin == end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& th : pool) th.join();
}

enum : std::uint8_t { kInterior = 0, kOutOfBounds = 1, kInfeasible = 2 };

// Euler transitions tabulated once per solve: the dynamics do not change
// across iterations, so each (node, control) pair stores its stage cost and
// the interpolation cell of its successor.
struct TransitionTable {
    std::size_t nodes = 0;
    std::size_t n_controls = 0;
    std::size_t n_axes = 0;
    std::vector<double> cost_dt;
    std::vector<std::int64_t> base;  // flat index of the low corner
    std::vector<double> frac;        // n_axes entries per pair
    std::vector<std::uint8_t> kind;
    std::vector<std::uint8_t> absorbing;  // per node: inside the capture box
    std::vector<std::size_t> strides;
};

TransitionTable build_transitions(const DPConfig& cfg, const DynamicsModel& model) {
    cfg.validate(model.state_dim(), model.control_dim());

    TransitionTable t;
    t.n_axes = cfg.state_grid.size();
    t.nodes = grid_node_count(cfg.state_grid);
    t.n_controls = cfg.control_set.size();
    t.strides = grid_strides(cfg.state_grid);
    const std::size_t pairs = t.nodes * t.n_controls;
    t.cost_dt.assign(pairs, 0.0);
    t.base.assign(pairs, 0);
    t.frac.assign(pairs * t.n_axes, 0.0);
    t.kind.assign(pairs, kInterior);
    t.absorbing.assign(t.nodes, 0);

    std::atomic<bool> bad_dynamics{false};
    parallel_for(t.nodes, cfg.threads, [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> idx(t.n_axes);
        std::vector<double> x(t.n_axes), dx(t.n_axes), succ(t.n_axes);
        for (std::size_t node = begin; node < end; ++node) {
            std::size_t rem = node;
            for (std::size_t i = 0; i < t.n_axes; ++i) {
                idx[i] = rem / t.strides[i];
                rem %= t.strides[i];
                x[i] = cfg.state_grid[i].value(idx[i]);
            }

            bool on_target = true;
            for (std::size_t i = 0; i < t.n_axes; ++i) {
                if (std::abs(x[i] - cfg.target.point[i]) > cfg.target.tol[i]) {
                    on_target = false;
                    break;
                }
            }
            t.absorbing[node] = on_target ? 1 : 0;

            for (std::size_t c = 0; c < t.n_controls; ++c) {
                const std::size_t p = node * t.n_controls + c;
                const auto& u = cfg.control_set[c];
                if (!model.feasible(x, u)) {
                    t.kind[p] = kInfeasible;
                    continue;
                }
                model.derivative(x, u, dx);
                bool oob = false;
                for (std::size_t i = 0; i < t.n_axes; ++i) {
                    succ[i] = x[i] + dx[i] * cfg.dt;
                    if (!std::isfinite(succ[i])) {
                        bad_dynamics.store(true, std::memory_order_relaxed);
                        succ[i] = 0.0;
                    }
                    if (succ[i] < cfg.state_grid[i].lo || succ[i] > cfg.state_grid[i].hi)
                        oob = true;
                }
                t.cost_dt[p] = model.cost_rate(x, u) * cfg.dt;
                if (oob) {
                    t.kind[p] = kOutOfBounds;
                    continue;
                }
                std::int64_t flat = 0;
                for (std::size_t i = 0; i < t.n_axes; ++i) {
                    const auto cc = locate_on_axis(cfg.state_grid[i], succ[i]);
                    flat += static_cast<std::int64_t>(cc->cell) *
                            static_cast<std::int64_t>(t.strides[i]);
                    t.frac[p * t.n_axes + i] = cc->frac;
                }
                t.base[p] = flat;
            }
        }
    });
    if (bad_dynamics.load())
        throw NonFiniteDynamics("dynamics produced a NaN or infinity on the grid");
    return t;
}

inline double interpolate_value(const TransitionTable& t, std::span<const double> J,
                                std::size_t pair) {
    if (t.n_axes == 2) {
        const double fx = t.frac[pair * 2];
        const double fy = t.frac[pair * 2 + 1];
        const double* j = J.data() + t.base[pair];
        const std::size_t s0 = t.strides[0];
        const double low = (1.0 - fy) * j[0] + fy * j[1];
        const double high = (1.0 - fy) * j[s0] + fy * j[s0 + 1];
        return (1.0 - fx) * low + fx * high;
    }
    double acc = 0.0;
    const std::size_t corners = std::size_t{1} << t.n_axes;
    for (std::size_t mask = 0; mask < corners; ++mask) {
        double w = 1.0;
        std::int64_t flat = t.base[pair];
        for (std::size_t i = 0; i < t.n_axes; ++i) {
            const bool hi = (mask >> i) & 1u;
            const double f = t.frac[pair * t.n_axes + i];
            w *= hi ? f : 1.0 - f;
            if (hi) flat += static_cast<std::int64_t>(t.strides[i]);
        }
        if (w != 0.0) acc += w * J[static_cast<std::size_t>(flat)];
    }
    return acc;
}

// Jacobi sweep: every node reads the previous field, so the result does not
// depend on how nodes are split across threads.
double backup_sweep(const TransitionTable& t, const DPConfig& cfg,
                    std::span<const double> J_prev, std::span<double> J_new,
                    std::span<std::size_t> policy, unsigned threads) {
    std::mutex residual_mutex;
    double residual_all = 0.0;

    auto body = [&](std::size_t begin, std::size_t end) {
        double residual = 0.0;
        for (std::size_t node = begin; node < end; ++node) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_idx = 0;
            const std::size_t pair0 = node * t.n_controls;
            for (std::size_t c = 0; c < t.n_controls; ++c) {
                const std::size_t p = pair0 + c;
                double candidate;
                switch (t.kind[p]) {
                    case kInfeasible:
                        continue;  // +inf surrogate: never competes
                    case kOutOfBounds:
                        candidate = t.cost_dt[p] + cfg.oob_cost;
                        break;
                    default:
                        candidate = t.cost_dt[p] + interpolate_value(t, J_prev, p);
                }
                if (candidate < best) {
                    best = candidate;
                    best_idx = c;
                }
            }
            policy[node] = best_idx;
            if (t.absorbing[node]) {
                J_new[node] = J_prev[node];
            } else if (std::isinf(best)) {
                // Every control infeasible: the node is dead, park it at the
                // out-of-bounds terminal value.
                J_new[node] = cfg.oob_cost;
            } else {
                J_new[node] = best;
            }
            residual = std::max(residual, std::abs(J_new[node] - J_prev[node]));
        }
        std::lock_guard<std::mutex> lock(residual_mutex);
        residual_all = std::max(residual_all, residual);
    };
    parallel_for(t.nodes, threads, body);
    return residual_all;
}

std::vector<double> terminal_field(const TransitionTable& t, const DPConfig& cfg) {
    std::vector<double> J(t.nodes);
    for (std::size_t node = 0; node < t.nodes; ++node)
        J[node] = t.absorbing[node] ? cfg.target_cost : cfg.oob_cost;
    return J;
}

}  // namespace

BackupResult bellman_backup(std::span<const double> cost_to_go, const DPConfig& cfg,
                            const DynamicsModel& model) {
    const TransitionTable t = build_transitions(cfg, model);
    if (cost_to_go.size() != t.nodes)
        throw Error("cost-to-go field size does not match the grid");
    for (double v : cost_to_go)
        if (!std::isfinite(v)) throw Error("cost-to-go field contains a non-finite value");

    BackupResult out;
    out.cost_to_go.resize(t.nodes);
    out.policy_index.resize(t.nodes);
    backup_sweep(t, cfg, cost_to_go, out.cost_to_go, out.policy_index, cfg.threads);
    return out;
}

ValueIterationResult solve(const DPConfig& cfg, const DynamicsModel& model) {
    const TransitionTable t = build_transitions(cfg, model);

    std::vector<double> J = terminal_field(t, cfg);
    std::vector<double> J_next(t.nodes);
    std::vector<std::size_t> policy_idx(t.nodes);
    std::vector<double> residuals;
    residuals.reserve(cfg.steps);

    for (std::size_t step = 0; step < cfg.steps; ++step) {
        residuals.push_back(backup_sweep(t, cfg, J, J_next, policy_idx, cfg.threads));
        std::swap(J, J_next);
    }

    const std::size_t k = model.control_dim();
    std::vector<double> values(t.nodes * k);
    for (std::size_t node = 0; node < t.nodes; ++node) {
        const auto& u = cfg.control_set[policy_idx[node]];
        for (std::size_t j = 0; j < k; ++j) values[node * k + j] = u[j];
    }

    const auto st = transforms_for(model.signature(), model.context_vector());
    ContextMeta meta;
    meta.system = model.signature().name;
    meta.context = st.context;
    meta.context_star = st.context_star;

    ValueIterationResult result{
        std::move(J),
        TabularPolicy(cfg.state_grid, k, std::move(values), Interp::multilinear,
                      OobPolicy::clamp, std::move(meta)),
        std::move(residuals),
        cfg,
    };
    return result;
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::target_captured: return "target_captured";
        case StopReason::domain_exited: return "domain_exited";
        default: return "horizon_reached";
    }
}

Rollout rollout(const FeedbackLaw& f, const DynamicsModel& model, const DPConfig& cfg,
                std::span<const double> x0, double dt, double t_end) {
    if (!(t_end > 0.0)) throw Error("rollout end time must be positive");
    if (!(dt > 0.0)) throw Error("rollout time step must be positive");
    if (x0.size() != cfg.state_grid.size()) throw Error("initial state dimension mismatch");

    const std::size_t n = x0.size();
    Rollout r;
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> dx(n);
    double t = 0.0;

    auto captured = [&](const std::vector<double>& state) {
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(state[i] - cfg.target.point[i]) > cfg.target.tol[i]) return false;
        return true;
    };
    auto inside = [&](const std::vector<double>& state) {
        for (std::size_t i = 0; i < n; ++i)
            if (state[i] < cfg.state_grid[i].lo || state[i] > cfg.state_grid[i].hi)
                return false;
        return true;
    };

    for (;;) {
        r.times.push_back(t);
        r.states.push_back(x);
        if (captured(x)) {
            r.reason = StopReason::target_captured;
            return r;
        }
        if (!inside(x)) {
            r.reason = StopReason::domain_exited;
            return r;
        }
        if (t >= t_end - 0.5 * dt) {
            r.reason = StopReason::horizon_reached;
            return r;
        }

        const auto u = f.eval(x);
        r.controls.push_back(u);
        r.accumulated_cost += model.cost_rate(x, u) * dt;
        model.derivative(x, u, dx);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += dx[i] * dt;
            if (!std::isfinite(x[i]))
                throw NonFiniteDynamics("rollout produced a non-finite state");
        }
        t += dt;
    }
}

}  // namespace dimpol
