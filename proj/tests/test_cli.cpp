#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "dimpol/commands.hpp"
#include "dimpol/config.hpp"
#include "dimpol/policy_io.hpp"
#include "dimpol/solver.hpp"
#include "dimpol/systems.hpp"

using namespace dimpol;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("dimpol_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    fs::path file(const std::string& name) const { return path / name; }
    static inline int counter = 0;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::trunc);
    os << text;
}

PolicyFileData small_solved_policy(const char* context_name, std::size_t grid = 31,
                                   std::size_t controls = 7) {
    const PendulumContext ctx = pendulum_table_context(context_name);
    BenchmarkDpSettings s;
    s.grid_points = grid;
    s.control_points = controls;
    const auto cfg = pendulum_dp_config(ctx, s);
    auto result = solve(cfg, PendulumModel(ctx));
    PolicyFileData data{std::move(result.policy)};
    data.control_lo = cfg.control_set.front()[0];
    data.control_hi = cfg.control_set.back()[0];
    data.control_count = cfg.control_set.size();
    return data;
}

}  // namespace

TEST_CASE("run config parsing") {
    const auto cfg = RunConfig::parse_text("# demo\n"
                                           "system = pendulum\n"
                                           "context = c_a\n"
                                           "grid = 51      # inline comment\n"
                                           "controls = 11\n"
                                           "out = policy.csv\n",
                                           "inline");
    CHECK(cfg.system == "pendulum");
    CHECK(cfg.grid == 51);
    CHECK(cfg.controls == 11);
    CHECK(*cfg.out == "policy.csv");
    const auto ctx = cfg.pendulum_context();
    CHECK(ctx.tau_max == 5.0);

    const auto explicit_cfg = RunConfig::parse_text("system = car\n"
                                                    "g = 9.8\nl = 1\nx_c = 0.5\ny_c = 0.5\n"
                                                    "q = 20\n",
                                                    "inline");
    const auto car = explicit_cfg.car_context();
    CHECK(car.q == 20.0);
}

TEST_CASE("run config rejects malformed input") {
    CHECK_THROWS_AS(RunConfig::parse_text("grid = 10\n", "inline"), ParseError);  // no system
    CHECK_THROWS_AS(RunConfig::parse_text("system = boat\n", "inline"), ParseError);
    CHECK_THROWS_AS(RunConfig::parse_text("system = pendulum\ncontext = c_a\nwhat = 1\n",
                                          "inline"),
                    ParseError);
    CHECK_THROWS_AS(RunConfig::parse_text("system = pendulum\ncontext = c_a\ngrid = x\n",
                                          "inline"),
                    ParseError);
    // Pendulum context spelled out but one field missing.
    CHECK_THROWS_AS(RunConfig::parse_text("system = pendulum\nm = 1\ng = 10\nl = 1\nq = 1\n",
                                          "inline"),
                    ParseError);

    try {
        RunConfig::parse_text("system = pendulum\ncontext = c_a\ngrid = 1\n", "inline");
        FAIL("expected grid validation to fail");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("grid count must be >= 2") != std::string::npos);
    }
}

TEST_CASE("policy file round trip is bit exact") {
    TempDir dir;
    const auto data = small_solved_policy("c_a");
    const auto path = dir.file("policy.csv");
    write_policy_file(path, data);

    const auto loaded = read_policy_file(path);
    CHECK(loaded.policy.values() == data.policy.values());
    for (int ax = 0; ax < 2; ++ax) {
        CHECK(loaded.policy.axes()[ax].lo == data.policy.axes()[ax].lo);
        CHECK(loaded.policy.axes()[ax].hi == data.policy.axes()[ax].hi);
        CHECK(loaded.policy.axes()[ax].count == data.policy.axes()[ax].count);
        CHECK(loaded.policy.axes()[ax].name == data.policy.axes()[ax].name);
    }
    CHECK(loaded.policy.meta().system == "pendulum");
    CHECK(loaded.policy.meta().context == data.policy.meta().context);
    CHECK(loaded.policy.meta().context_star == data.policy.meta().context_star);
    CHECK(loaded.control_lo == data.control_lo);
    CHECK(loaded.control_hi == data.control_hi);
    CHECK(loaded.control_count == data.control_count);

    CHECK_THROWS_AS(read_policy_file(dir.file("missing.csv")), ParseError);
}

TEST_CASE("solve command writes the three artifacts") {
    TempDir dir;
    write_text(dir.file("run.cfg"), "system = pendulum\ncontext = c_a\n"
                                    "grid = 21\ncontrols = 5\n"
                                    "out = " + dir.file("ca.csv").string() + "\n");
    SolveArgs args;
    args.config_path = dir.file("run.cfg").string();
    CHECK(cmd_solve(args) == kExitOk);
    CHECK(fs::exists(dir.file("ca.csv")));
    CHECK(fs::exists(dir.file("ca_cost.csv")));
    CHECK(fs::exists(dir.file("ca_residual.csv")));
    CHECK_FALSE(fs::exists(dir.file("ca.csv.tmp")));

    const auto data = read_policy_file(dir.file("ca.csv"));
    CHECK(data.policy.meta().context_star[0] == doctest::Approx(0.1));
    CHECK(data.policy.meta().context_star[1] == doctest::Approx(0.5));
}

TEST_CASE("solve command rejects bad configs with exit 2") {
    TempDir dir;
    write_text(dir.file("bad.cfg"), "system = pendulum\ncontext = c_a\ngrid = 1\nout = x\n");
    SolveArgs args;
    args.config_path = dir.file("bad.cfg").string();
    CHECK(cmd_solve(args) == kExitParse);

    args.config_path = dir.file("absent.cfg").string();
    CHECK(cmd_solve(args) == kExitParse);
}

TEST_CASE("transfer command maps similar contexts and rejects others") {
    TempDir dir;
    write_policy_file(dir.file("ca.csv"), small_solved_policy("c_a"));

    TransferArgs args;
    args.src_path = dir.file("ca.csv").string();
    args.context_name = "c_b";
    args.out = dir.file("cb.csv").string();
    CHECK(cmd_transfer(args) == kExitOk);

    const auto moved = read_policy_file(dir.file("cb.csv"));
    CHECK(moved.policy.meta().context_star[0] == doctest::Approx(0.1));
    // Torque bound doubles with the gravity torque: c_b has m g l = 20.
    CHECK(moved.control_hi == doctest::Approx(10.0));

    args.context_name = "c_g";
    args.out = dir.file("cg.csv").string();
    CHECK(cmd_transfer(args) == kExitNotSimilar);
    CHECK_FALSE(fs::exists(dir.file("cg.csv")));

    // Forced transfer across blocks is tagged approximate.
    args.force = true;
    CHECK(cmd_transfer(args) == kExitOk);
    CHECK(read_policy_file(dir.file("cg.csv")).policy.meta().approximate);
}

TEST_CASE("identity transfer reproduces the table rows byte for byte") {
    TempDir dir;
    write_policy_file(dir.file("ca.csv"), small_solved_policy("c_a"));
    TransferArgs args;
    args.src_path = dir.file("ca.csv").string();
    args.context_name = "c_a";
    args.out = dir.file("ca2.csv").string();
    REQUIRE(cmd_transfer(args) == kExitOk);

    auto table_section = [](const fs::path& p) {
        std::ifstream is(p);
        std::ostringstream rows;
        std::string line;
        while (std::getline(is, line))
            if (!line.empty() && line[0] != '#') rows << line << "\n";
        return rows.str();
    };
    CHECK(table_section(dir.file("ca.csv")) == table_section(dir.file("ca2.csv")));
}

TEST_CASE("compare command on identical and dissimilar policies") {
    TempDir dir;
    write_policy_file(dir.file("ca.csv"), small_solved_policy("c_a"));

    CompareArgs args;
    args.path_a = dir.file("ca.csv").string();
    args.path_b = dir.file("ca.csv").string();
    args.dimensionless = true;
    args.assert_thresholds = true;
    args.report_out = dir.file("report.csv").string();
    CHECK(cmd_compare(args) == kExitOk);
    CHECK(fs::exists(dir.file("report.csv")));

    // A dissimilar pair compared dimensionlessly violates the thresholds.
    write_policy_file(dir.file("cg.csv"), small_solved_policy("c_g"));
    args.path_b = dir.file("cg.csv").string();
    CHECK(cmd_compare(args) == kExitAssertion);

    // Mixing systems is a usage error.
    const CarContext car_ctx = car_table_context("c_b");
    BenchmarkDpSettings s;
    s.grid_points = 21;
    s.control_points = 5;
    auto car_result = solve(car_dp_config(car_ctx, s), CarModel(car_ctx));
    PolicyFileData car_data{std::move(car_result.policy)};
    write_policy_file(dir.file("car.csv"), car_data);
    args.path_b = dir.file("car.csv").string();
    CHECK(cmd_compare(args) == kExitParse);
}

TEST_CASE("analytic check passes") {
    CHECK(cmd_analytic_check({}) == kExitOk);
}
