#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dimpol {

/// One uniformly spaced grid axis, bounds inclusive.
struct GridAxis {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;

    double step() const { return (hi - lo) / static_cast<double>(count - 1); }
    double value(std::size_t i) const { return lo + static_cast<double>(i) * step(); }
};

/// Cell-local coordinate of a query point: cell index in [0, count-2] and
/// fractional position in [0, 1] within that cell.
struct CellCoord {
    std::size_t cell = 0;
    double frac = 0.0;
};

/// Locates x on the axis, or nullopt when x is outside [lo, hi]. Positions
/// within 1e-12 cells of a node are snapped onto it so that node queries
/// read stored values exactly.
std::optional<CellCoord> locate_on_axis(const GridAxis& axis, double x);

/// Row-major strides, axis 0 outermost.
std::vector<std::size_t> grid_strides(const std::vector<GridAxis>& axes);

std::size_t grid_node_count(const std::vector<GridAxis>& axes);

}  // namespace dimpol
