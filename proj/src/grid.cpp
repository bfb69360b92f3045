#include "dimpol/grid.hpp"

#include <cmath>

namespace dimpol {

std::optional<CellCoord> locate_on_axis(const GridAxis& axis, double x) {
    if (x < axis.lo || x > axis.hi) return std::nullopt;
    double pos = (x - axis.lo) / axis.step();
    // Snap near-node positions so node queries read stored values exactly.
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) <= 1.0e-12 * std::max(1.0, std::abs(pos))) pos = nearest;

    const double max_cell = static_cast<double>(axis.count - 2);
    CellCoord c;
    if (pos <= 0.0) {
        c.cell = 0;
        c.frac = 0.0;
    } else if (pos >= max_cell + 1.0) {
        c.cell = axis.count - 2;
        c.frac = 1.0;
    } else {
        double cell = std::floor(pos);
        if (cell > max_cell) cell = max_cell;
        c.cell = static_cast<std::size_t>(cell);
        c.frac = pos - cell;
    }
    return c;
}

std::vector<std::size_t> grid_strides(const std::vector<GridAxis>& axes) {
    std::vector<std::size_t> strides(axes.size(), 1);
    for (std::size_t i = axes.size(); i-- > 1;)
        strides[i - 1] = strides[i] * axes[i].count;
    return strides;
}

std::size_t grid_node_count(const std::vector<GridAxis>& axes) {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.count;
    return n;
}

}  // namespace dimpol
