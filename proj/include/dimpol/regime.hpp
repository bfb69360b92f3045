#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dimpol/dims.hpp"
#include "dimpol/policy.hpp"
#include "dimpol/systems.hpp"

namespace dimpol {

/// Pendulum policy regimes classified by R* = tau_max* / q*.
enum class Regime { bang_bang, transition, unconstrained };

const char* regime_name(Regime r);

struct RegimeReport {
    double r_star = 0.0;
    double saturation_fraction = 0.0;
    Regime classification = Regime::transition;
};

/// One-dimensional profile of a dimensionless policy along the position
/// axis at a fixed dimensionless velocity, optionally restricted to a
/// position window. Throws OutOfDomain when the velocity or window leaves
/// the grid.
struct PolicySlice {
    std::vector<double> positions;
    std::vector<double> values;
};

PolicySlice slice_policy(const DimensionlessPolicy& fstar, double velocity_star,
                         std::optional<double> pos_lo = std::nullopt,
                         std::optional<double> pos_hi = std::nullopt);

/// Fraction of profile points at the torque bound, within a small relative
/// tolerance (the discrete control set never hits the bound exactly).
double saturation_fraction(std::span<const double> values, double tau_max_star,
                           double tol = 1.0e-3);

/// Thresholds R* <= 0.1 (bang-bang) and R* >= 10 (unconstrained) are closed.
Regime classify(double r_star);

/// Similarity relaxed by regime: full similarity, or both unconstrained with
/// equal q*, or both bang-bang with equal tau_max*. Pendulum signature only.
bool regime_relaxed_similarity(const ScalingTransforms& a, const ScalingTransforms& b);

// ---------------------------------------------------------------------------
// Sensitivity sweeps over the dimensionless task plane.
// ---------------------------------------------------------------------------

struct SweepPoint {
    std::string label;
    double q_star = 0.0;
    double tau_max_star = 0.0;
};

/// Default sweep: tau_max* in {0.1, 0.5, 2.0, 5.0} at q* = 0.5, and
/// q* in {0.05, 0.2, 1.0, 2.0} at tau_max* = 0.5.
std::vector<SweepPoint> default_sweep_points();

struct SweepRow {
    SweepPoint point;
    RegimeReport report;
};

/// Solves one pendulum per point (m = 1, g = 10, l = 1 base system) and
/// measures saturation of the full zero-velocity slice.
std::vector<SweepRow> pendulum_regime_sweep(std::span<const SweepPoint> points,
                                            const BenchmarkDpSettings& settings);

/// Report for a single solved dimensionless pendulum policy. Saturation is
/// measured across the whole position axis.
RegimeReport regime_report(const DimensionlessPolicy& fstar, double q_star,
                           double tau_max_star);

}  // namespace dimpol
