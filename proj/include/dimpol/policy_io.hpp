#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "dimpol/grid.hpp"
#include "dimpol/policy.hpp"

namespace dimpol {

/// On-disk policy: the table plus the control discretization it was solved
/// with, which comparison metrics are expressed in.
struct PolicyFileData {
    TabularPolicy policy;
    double control_lo = 0.0;
    double control_hi = 0.0;
    std::size_t control_count = 0;

    bool has_control_info() const { return control_count >= 2; }
};

/// CSV with '#'-prefixed key=value header lines, then an index/value row per
/// grid node in row-major axis-0-outer order. Values are printed with 17
/// significant digits so a round trip is bit exact.
void write_policy_file(const std::filesystem::path& path, const PolicyFileData& data);

PolicyFileData read_policy_file(const std::filesystem::path& path);

/// Scalar field (e.g. cost-to-go) over the same grid layout.
void write_field_file(const std::filesystem::path& path, const std::vector<GridAxis>& axes,
                      const std::vector<double>& values, const std::string& column,
                      const ContextMeta& meta);

/// Per-iteration convergence residuals.
void write_residual_file(const std::filesystem::path& path,
                         const std::vector<double>& residuals);

}  // namespace dimpol
