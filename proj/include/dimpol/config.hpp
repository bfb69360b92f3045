#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "dimpol/systems.hpp"

namespace dimpol {

/// Flat key = value run configuration with '#' comments.
///
/// Keys: system (pendulum|car); either context = <table name> or the
/// per-system fields (m, g, l, q, tau_max) / (g, l, x_c, y_c, q); grid,
/// controls, dt_star, horizon_star, horizon_periods, out.
struct RunConfig {
    std::string system;
    std::optional<std::string> context_name;
    std::map<std::string, double> fields;
    std::size_t grid = 501;
    std::size_t controls = 101;
    std::optional<double> dt_star;
    std::optional<double> horizon_star;
    std::optional<std::string> out;

    static RunConfig parse_file(const std::filesystem::path& path);
    static RunConfig parse_text(const std::string& text, const std::string& origin);

    /// Throws ParseError on out-of-range numbers or an unknown system.
    void validate() const;

    bool is_pendulum() const { return system == "pendulum"; }

    /// Resolve the context either from the named table entry or from
    /// explicit fields. Throws ParseError when under-specified.
    PendulumContext pendulum_context() const;
    CarContext car_context() const;

    BenchmarkDpSettings dp_settings() const;
};

}  // namespace dimpol
