#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dimpol/dims.hpp"
#include "dimpol/errors.hpp"
#include "dimpol/grid.hpp"

namespace dimpol {

enum class Interp { nearest, multilinear };
enum class OobPolicy { clamp, error };

/// Provenance of a policy table: which problem it solves and at which
/// context instance.
struct ContextMeta {
    std::string system;                // signature name
    std::vector<double> context;       // dimensional context vector
    std::vector<double> context_star;  // its dimensionless form
    bool dimensionless = false;
    bool approximate = false;          // set by forced re-dimensionalization
};

/// A state-feedback map evaluable at any state.
class FeedbackLaw {
  public:
    virtual ~FeedbackLaw() = default;
    virtual std::vector<double> eval(std::span<const double> x) const = 0;
};

/// Feedback law stored as a dense vector field on a uniform state grid.
/// Immutable after construction; lookups interpolate per the configured mode.
class TabularPolicy {
  public:
    TabularPolicy(std::vector<GridAxis> axes, std::size_t output_dim,
                  std::vector<double> values, Interp interp, OobPolicy oob,
                  ContextMeta meta);

    const std::vector<GridAxis>& axes() const { return axes_; }
    std::size_t state_dim() const { return axes_.size(); }
    std::size_t output_dim() const { return output_dim_; }
    const std::vector<double>& values() const { return values_; }
    Interp interp() const { return interp_; }
    OobPolicy oob() const { return oob_; }
    const ContextMeta& meta() const { return meta_; }

    std::size_t node_count() const { return node_count_; }
    const std::vector<std::size_t>& strides() const { return strides_; }
    std::size_t flat_index(std::span<const std::size_t> idx) const;

    /// Value stored at a grid node, no interpolation.
    std::span<const double> node_value(std::size_t flat) const {
        return {values_.data() + flat * output_dim_, output_dim_};
    }

    /// Interpolated lookup. Out-of-box queries follow the oob policy;
    /// non-finite queries throw OutOfDomain.
    std::vector<double> evaluate(std::span<const double> x) const;

  private:
    std::vector<GridAxis> axes_;
    std::size_t output_dim_;
    std::vector<double> values_;
    Interp interp_;
    OobPolicy oob_;
    ContextMeta meta_;
    std::vector<std::size_t> strides_;
    std::size_t node_count_;
};

/// A tabular policy whose axes and values are dimensionless groups.
struct DimensionlessPolicy {
    TabularPolicy table;
};

/// Adapter so a table can drive simulations through the FeedbackLaw interface.
class TabularFeedback : public FeedbackLaw {
  public:
    explicit TabularFeedback(const TabularPolicy& policy) : policy_(&policy) {}
    std::vector<double> eval(std::span<const double> x) const override {
        return policy_->evaluate(x);
    }

  private:
    const TabularPolicy* policy_;
};

/// Scales axes by the state factors and values by the input factors of the
/// home-context transforms. Diagonal scalings keep the grid uniform.
DimensionlessPolicy to_dimensionless(const TabularPolicy& f, const ScalingTransforms& st);

/// Inverse of to_dimensionless at the target context. The dimensionless
/// contexts must match within 1e-9 unless force is set, in which case the
/// result is tagged approximate.
TabularPolicy from_dimensionless(const DimensionlessPolicy& fstar, const ScalingTransforms& st,
                                 bool force = false);

/// Composite single scaling equal to from_dimensionless(to_dimensionless(f)).
/// Requires dimensional similarity of the two contexts at 1e-9.
TabularPolicy transfer(const TabularPolicy& f_a, const ScalingTransforms& st_a,
                       const ScalingTransforms& st_b);

/// Re-evaluates a table on a new grid using its own interpolation mode.
TabularPolicy resample(const TabularPolicy& f, const std::vector<GridAxis>& new_axes);

/// Deviation statistics between a reference table and another table
/// resampled onto the reference grid. A boundary band of the given fraction
/// of each axis span is excluded; fraction_within counts nodes whose
/// deviation stays below within_band.
struct TableComparison {
    double max_abs_dev = 0.0;
    double mean_abs_dev = 0.0;
    double fraction_within = 0.0;
    std::size_t compared_nodes = 0;
};

TableComparison compare_tables(const TabularPolicy& ref, const TabularPolicy& other,
                               double boundary_margin, double within_band);

}  // namespace dimpol
