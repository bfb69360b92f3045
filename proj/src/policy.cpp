#include "dimpol/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dimpol {

TabularPolicy::TabularPolicy(std::vector<GridAxis> axes, std::size_t output_dim,
                             std::vector<double> values, Interp interp, OobPolicy oob,
                             ContextMeta meta)
    : axes_(std::move(axes)),
      output_dim_(output_dim),
      values_(std::move(values)),
      interp_(interp),
      oob_(oob),
      meta_(std::move(meta)) {
    if (axes_.empty()) throw Error("policy table needs at least one state axis");
    for (const auto& a : axes_) {
        if (a.count < 2) throw Error("axis '" + a.name + "': grid count must be >= 2");
        if (!(a.lo < a.hi)) throw Error("axis '" + a.name + "': min must be below max");
    }
    if (output_dim_ == 0) throw Error("policy table needs at least one output component");
    strides_ = grid_strides(axes_);
    node_count_ = grid_node_count(axes_);
    if (values_.size() != node_count_ * output_dim_)
        throw Error("policy value array has " + std::to_string(values_.size()) +
                    " entries, expected " + std::to_string(node_count_ * output_dim_));
    for (double v : values_)
        if (!std::isfinite(v)) throw Error("policy table contains a non-finite value");
}

std::size_t TabularPolicy::flat_index(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < axes_.size(); ++i) flat += idx[i] * strides_[i];
    return flat;
}

std::vector<double> TabularPolicy::evaluate(std::span<const double> x) const {
    if (x.size() != axes_.size())
        throw Error("query has dimension " + std::to_string(x.size()) + ", table expects " +
                    std::to_string(axes_.size()));

    std::vector<CellCoord> coords(axes_.size());
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        double xi = x[i];
        if (!std::isfinite(xi)) throw OutOfDomain("non-finite query coordinate");
        auto c = locate_on_axis(axes_[i], xi);
        if (!c) {
            if (oob_ == OobPolicy::error)
                throw OutOfDomain("query outside the table domain on axis '" +
                                  axes_[i].name + "'");
            xi = std::clamp(xi, axes_[i].lo, axes_[i].hi);
            c = locate_on_axis(axes_[i], xi);
        }
        coords[i] = *c;
    }

    std::vector<double> out(output_dim_, 0.0);
    if (interp_ == Interp::nearest) {
        std::size_t flat = 0;
        for (std::size_t i = 0; i < axes_.size(); ++i) {
            const std::size_t idx = coords[i].frac >= 0.5 ? coords[i].cell + 1 : coords[i].cell;
            flat += idx * strides_[i];
        }
        const auto v = node_value(flat);
        std::copy(v.begin(), v.end(), out.begin());
        return out;
    }

    const std::size_t corners = std::size_t{1} << axes_.size();
    for (std::size_t mask = 0; mask < corners; ++mask) {
        double w = 1.0;
        std::size_t flat = 0;
        for (std::size_t i = 0; i < axes_.size(); ++i) {
            const bool hi = (mask >> i) & 1u;
            w *= hi ? coords[i].frac : 1.0 - coords[i].frac;
            flat += (coords[i].cell + (hi ? 1 : 0)) * strides_[i];
        }
        if (w == 0.0) continue;
        const auto v = node_value(flat);
        for (std::size_t j = 0; j < output_dim_; ++j) out[j] += w * v[j];
    }
    return out;
}

namespace {

// Applies per-axis scale factors to the grid and per-component factors to
// the values. A negative axis factor reverses that axis so bounds stay
// ordered.
TabularPolicy scale_table(const TabularPolicy& f, std::span<const double> axis_scale,
                          std::span<const double> value_scale, ContextMeta meta) {
    const auto& axes = f.axes();
    std::vector<GridAxis> new_axes(axes.size());
    std::vector<bool> flip(axes.size(), false);
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const double s = axis_scale[i];
        if (!std::isfinite(s) || s == 0.0)
            throw Error("non-finite or zero axis scale factor");
        new_axes[i] = axes[i];
        if (s < 0.0) {
            new_axes[i].lo = axes[i].hi * s;
            new_axes[i].hi = axes[i].lo * s;
            flip[i] = true;
        } else {
            new_axes[i].lo = axes[i].lo * s;
            new_axes[i].hi = axes[i].hi * s;
        }
    }

    const std::size_t k = f.output_dim();
    std::vector<double> new_values(f.values().size());
    const auto& strides = f.strides();
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t node = 0; node < f.node_count(); ++node) {
        std::size_t dst = 0;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            const std::size_t j = flip[i] ? axes[i].count - 1 - idx[i] : idx[i];
            dst += j * strides[i];
        }
        const auto src = f.node_value(node);
        for (std::size_t j = 0; j < k; ++j) new_values[dst * k + j] = src[j] * value_scale[j];

        for (std::size_t i = axes.size(); i-- > 0;) {
            if (++idx[i] < axes[i].count) break;
            idx[i] = 0;
        }
    }
    return TabularPolicy(std::move(new_axes), k, std::move(new_values), f.interp(), f.oob(),
                         std::move(meta));
}

void check_transform_shape(const TabularPolicy& f, const ScalingTransforms& st) {
    if (st.t_x.size() != f.state_dim() || st.t_u.size() != f.output_dim())
        throw Error("transforms for '" + st.signature_name +
                    "' do not match the table dimensions");
}

bool star_contexts_match(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!scalars_close(a[i], b[i], 1.0e-9)) return false;
    return true;
}

}  // namespace

DimensionlessPolicy to_dimensionless(const TabularPolicy& f, const ScalingTransforms& st) {
    check_transform_shape(f, st);
    ContextMeta meta = f.meta();
    meta.system = st.signature_name;
    meta.context = st.context;
    meta.context_star = st.context_star;
    meta.dimensionless = true;
    return DimensionlessPolicy{scale_table(f, st.t_x, st.t_u, std::move(meta))};
}

TabularPolicy from_dimensionless(const DimensionlessPolicy& fstar, const ScalingTransforms& st,
                                 bool force) {
    check_transform_shape(fstar.table, st);
    const bool matches = star_contexts_match(fstar.table.meta().context_star, st.context_star);
    if (!matches && !force)
        throw NotSimilar("dimensionless contexts differ; pass force to override");

    std::vector<double> inv_x(st.t_x.size());
    std::vector<double> inv_u(st.t_u.size());
    for (std::size_t i = 0; i < st.t_x.size(); ++i) inv_x[i] = 1.0 / st.t_x[i];
    for (std::size_t j = 0; j < st.t_u.size(); ++j) inv_u[j] = 1.0 / st.t_u[j];

    ContextMeta meta = fstar.table.meta();
    meta.system = st.signature_name;
    meta.context = st.context;
    meta.context_star = st.context_star;
    meta.dimensionless = false;
    meta.approximate = meta.approximate || !matches;
    return scale_table(fstar.table, inv_x, inv_u, std::move(meta));
}

TabularPolicy transfer(const TabularPolicy& f_a, const ScalingTransforms& st_a,
                       const ScalingTransforms& st_b) {
    check_transform_shape(f_a, st_a);
    check_transform_shape(f_a, st_b);
    if (!is_similar(st_a, st_b, 1.0e-9))
        throw NotSimilar("contexts are not dimensionally similar; transfer would be wrong");

    std::vector<double> axis_scale(st_a.t_x.size());
    std::vector<double> value_scale(st_a.t_u.size());
    for (std::size_t i = 0; i < axis_scale.size(); ++i)
        axis_scale[i] = st_a.t_x[i] / st_b.t_x[i];
    for (std::size_t j = 0; j < value_scale.size(); ++j)
        value_scale[j] = st_a.t_u[j] / st_b.t_u[j];

    ContextMeta meta = f_a.meta();
    meta.system = st_b.signature_name;
    meta.context = st_b.context;
    meta.context_star = st_b.context_star;
    meta.dimensionless = false;
    return scale_table(f_a, axis_scale, value_scale, std::move(meta));
}

TabularPolicy resample(const TabularPolicy& f, const std::vector<GridAxis>& new_axes) {
    if (new_axes.size() != f.state_dim())
        throw Error("resample grid dimension does not match the table");
    const std::size_t k = f.output_dim();
    const std::size_t nodes = grid_node_count(new_axes);
    std::vector<double> values(nodes * k);

    std::vector<std::size_t> idx(new_axes.size(), 0);
    std::vector<double> x(new_axes.size());
    for (std::size_t node = 0; node < nodes; ++node) {
        for (std::size_t i = 0; i < new_axes.size(); ++i) x[i] = new_axes[i].value(idx[i]);
        const auto v = f.evaluate(x);
        std::copy(v.begin(), v.end(), values.begin() + static_cast<std::ptrdiff_t>(node * k));
        for (std::size_t i = new_axes.size(); i-- > 0;) {
            if (++idx[i] < new_axes[i].count) break;
            idx[i] = 0;
        }
    }
    return TabularPolicy(new_axes, k, std::move(values), f.interp(), f.oob(), f.meta());
}

TableComparison compare_tables(const TabularPolicy& ref, const TabularPolicy& other,
                               double boundary_margin, double within_band) {
    if (ref.state_dim() != other.state_dim() || ref.output_dim() != other.output_dim())
        throw Error("tables have different dimensions");

    const auto& axes = ref.axes();
    // Node index window per axis with the boundary band removed.
    std::vector<std::size_t> first(axes.size()), last(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const double skirt = boundary_margin * static_cast<double>(axes[i].count - 1);
        first[i] = static_cast<std::size_t>(std::ceil(skirt - 1.0e-9));
        last[i] = axes[i].count - 1 - first[i];
        if (first[i] >= last[i]) throw Error("boundary margin leaves no interior nodes");
    }

    TableComparison cmp;
    double sum = 0.0;
    std::size_t within = 0;
    std::vector<std::size_t> idx = first;
    std::vector<double> x(axes.size());
    for (;;) {
        for (std::size_t i = 0; i < axes.size(); ++i) x[i] = axes[i].value(idx[i]);
        const auto a = ref.node_value(ref.flat_index(idx));
        const auto b = other.evaluate(x);
        double dev = 0.0;
        for (std::size_t j = 0; j < ref.output_dim(); ++j)
            dev = std::max(dev, std::abs(a[j] - b[j]));
        cmp.max_abs_dev = std::max(cmp.max_abs_dev, dev);
        sum += dev;
        if (dev <= within_band) ++within;
        ++cmp.compared_nodes;

        std::size_t i = axes.size();
        while (i-- > 0) {
            if (++idx[i] <= last[i]) break;
            idx[i] = first[i];
            if (i == 0) {
                cmp.mean_abs_dev = sum / static_cast<double>(cmp.compared_nodes);
                cmp.fraction_within =
                    static_cast<double>(within) / static_cast<double>(cmp.compared_nodes);
                return cmp;
            }
        }
    }
}

}  // namespace dimpol
