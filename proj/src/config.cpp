#include "dimpol/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "dimpol/errors.hpp"

namespace dimpol {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

const std::set<std::string> kPendulumFields = {"m", "g", "l", "q", "tau_max"};
const std::set<std::string> kCarFields = {"g", "l", "x_c", "y_c", "q"};

double parse_number(const std::string& key, const std::string& value,
                    const std::string& origin) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError(origin + ": bad numeric value '" + value + "' for key '" + key + "'");
    }
}

}  // namespace

RunConfig RunConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << is.rdbuf();
    return parse_text(buffer.str(), path.string());
}

RunConfig RunConfig::parse_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string raw;
    bool system_seen = false;
    while (std::getline(ss, raw)) {
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError(origin + ": empty key or value in '" + line + "'");

        if (key == "system") {
            cfg.system = value;
            system_seen = true;
        } else if (key == "context") {
            cfg.context_name = value;
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "grid") {
            cfg.grid = static_cast<std::size_t>(parse_number(key, value, origin));
        } else if (key == "controls") {
            cfg.controls = static_cast<std::size_t>(parse_number(key, value, origin));
        } else if (key == "dt_star") {
            cfg.dt_star = parse_number(key, value, origin);
        } else if (key == "horizon_star") {
            cfg.horizon_star = parse_number(key, value, origin);
        } else if (key == "horizon_periods") {
            cfg.horizon_star = parse_number(key, value, origin) * 2.0 * M_PI;
        } else if (kPendulumFields.count(key) || kCarFields.count(key)) {
            cfg.fields[key] = parse_number(key, value, origin);
        } else {
            throw ParseError(origin + ": unknown key '" + key + "'");
        }
    }
    if (!system_seen) throw ParseError(origin + ": missing 'system' key");
    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    if (system != "pendulum" && system != "car")
        throw ParseError("unknown system '" + system + "' (expected pendulum or car)");
    if (grid < 2) throw ParseError("grid count must be >= 2");
    if (controls < 2) throw ParseError("control count must be >= 2");
    if (dt_star && !(*dt_star > 0.0)) throw ParseError("dt_star must be positive");
    if (horizon_star && !(*horizon_star > 0.0))
        throw ParseError("horizon_star must be positive");

    const auto& allowed = is_pendulum() ? kPendulumFields : kCarFields;
    for (const auto& [key, value] : fields) {
        if (!allowed.count(key))
            throw ParseError("key '" + key + "' does not belong to system '" + system + "'");
        if (!(value > 0.0)) throw ParseError("field '" + key + "' must be positive");
    }
    if (!context_name) {
        for (const auto& key : allowed)
            if (!fields.count(key))
                throw ParseError("missing context field '" + key +
                                 "' (or name a table context with 'context = ...')");
    }
}

PendulumContext RunConfig::pendulum_context() const {
    if (!is_pendulum()) throw ParseError("config system is not 'pendulum'");
    if (context_name) {
        PendulumContext ctx = pendulum_table_context(*context_name);
        // Explicit fields override table entries.
        for (const auto& [key, value] : fields) {
            if (key == "m") ctx.m = value;
            else if (key == "g") ctx.g = value;
            else if (key == "l") ctx.l = value;
            else if (key == "q") ctx.q = value;
            else ctx.tau_max = value;
        }
        return ctx;
    }
    return {fields.at("m"), fields.at("g"), fields.at("l"), fields.at("q"),
            fields.at("tau_max")};
}

CarContext RunConfig::car_context() const {
    if (is_pendulum()) throw ParseError("config system is not 'car'");
    if (context_name) {
        CarContext ctx = car_table_context(*context_name);
        for (const auto& [key, value] : fields) {
            if (key == "g") ctx.g = value;
            else if (key == "l") ctx.l = value;
            else if (key == "x_c") ctx.x_c = value;
            else if (key == "y_c") ctx.y_c = value;
            else ctx.q = value;
        }
        return ctx;
    }
    return {fields.at("g"), fields.at("l"), fields.at("x_c"), fields.at("y_c"),
            fields.at("q")};
}

BenchmarkDpSettings RunConfig::dp_settings() const {
    BenchmarkDpSettings s;
    s.grid_points = grid;
    s.control_points = controls;
    if (dt_star) s.dt_star = *dt_star;
    if (horizon_star) s.horizon_star = *horizon_star;
    return s;
}

}  // namespace dimpol
