#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dimpol/dims.hpp"

namespace dimpol {

/// Continuous-time control problem: dynamics, running cost and feasibility,
/// tied to a problem signature and a concrete context instance. Implementations
/// are immutable value objects with pure methods.
class DynamicsModel {
  public:
    virtual ~DynamicsModel() = default;

    virtual std::size_t state_dim() const = 0;
    virtual std::size_t control_dim() const = 0;

    /// Writes dx/dt for state x under control u.
    virtual void derivative(std::span<const double> x, std::span<const double> u,
                            std::span<double> dx) const = 0;

    /// Nonnegative running cost rate.
    virtual double cost_rate(std::span<const double> x, std::span<const double> u) const = 0;

    /// Whether (x, u) satisfies the hard constraints of the problem.
    virtual bool feasible(std::span<const double> x, std::span<const double> u) const = 0;

    virtual const ProblemSignature& signature() const = 0;

    /// Context values in the signature's declaration order.
    virtual std::vector<double> context_vector() const = 0;
};

}  // namespace dimpol
