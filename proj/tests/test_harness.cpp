#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "hypflow/common.hpp"
#include "hypflow/harness.hpp"
#include "hypflow/selftest.hpp"

using namespace hypflow;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("hypflow_test_" + std::to_string(::getpid())) / name;
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run(const json& doc, const std::filesystem::path& out) {
    RunConfig cfg = config_from_json(doc);
    cfg.out_dir = out;
    std::ostringstream log;
    return run_command(cfg, log);
}

}  // namespace

TEST_CASE("config parsing splits top-level keys from parameters") {
    const auto c = config_from_json(json{{"command", "converge"}, {"seed", 7}, {"nodes", 64}, {"tol", 1e-9}, {"s", 0.25}});
    CHECK(c.command == "converge");
    CHECK(c.seed == 7);
    CHECK(c.nodes == 64);
    CHECK(c.tol == 1e-9);
    CHECK(c.params == json{{"s", 0.25}});
    CHECK(config_from_json(json{{"seed", "0x10"}}).seed == 16);
    CHECK_THROWS_AS(config_from_json(json::array()), InputError);
    CHECK_THROWS_AS(config_from_json(json{{"nodes", 1000}}), InputError);
    CHECK_THROWS_AS(config_from_json(json{{"tol", -1.0}}), InputError);
    CHECK_THROWS_AS(config_from_json(json{{"seed", -3}}), InputError);
    const auto round = config_from_json(c.to_json()["params"]);
    CHECK(round.params == c.params);
}

TEST_CASE("every subcommand is listed") {
    const auto& names = command_names();
    CHECK(names.size() == 7);
    CHECK(std::find(names.begin(), names.end(), "selftest") != names.end());
}

TEST_CASE("valid run exits 0 and writes CSV plus manifest") {
    const auto out = scratch("ok");
    CHECK(run(json{{"command", "discrete-flow"}, {"n", 6}, {"p", 2}, {"q", 4}, {"z", 0.5}, {"a", {0, 1, 1}}}, out) ==
          kExitOk);
    const std::string csv = slurp(out / "discrete-flow.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
    const json m = json::parse(slurp(out / "discrete-flow.manifest.json"));
    CHECK(m["verdict"]["nondecreasing"] == true);
    CHECK(m["config"]["params"]["n"] == 6);
    CHECK(m.contains("wall_time_s"));
    CHECK(m["version"] == HYPFLOW_VERSION);
}

TEST_CASE("unmet assertion exits 2 with a verdict in the manifest") {
    const auto out = scratch("violation");
    CHECK(run(json{{"command", "converge"}, {"n_list", {16, 32, 64}}, {"max_slope", -3.0}}, out) == kExitViolation);
    const json m = json::parse(slurp(out / "converge.manifest.json"));
    CHECK(m["verdict"] == "violated");
    CHECK(m["slope"].get<double>() > -3.0);
}

TEST_CASE("usage errors exit 1") {
    const auto out = scratch("usage");
    CHECK(run(json{{"command", "no-such-command"}}, out) == kExitUsage);
    CHECK(run(json{{"command", "discrete-flow"}, {"n", -2}}, out) == kExitUsage);
    CHECK(run(json{{"command", "discrete-flow"}, {"typo", 1}}, out) == kExitUsage);
    CHECK(run(json{{"command", "janson-flow"}, {"z", "half"}}, out) == kExitUsage);
    CHECK(run(json{{"command", "hy-flow"}, {"p", 3.0}}, out) == kExitUsage);
    CHECK(run(json{{"command", "discrete-flow"}, {"n", 4}}, "/proc/hypflow-unwritable") == kExitUsage);
}

TEST_CASE("reruns are byte-identical") {
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    const json doc{{"command", "janson-flow"}, {"random_degree", 4}, {"seed", 99}, {"s_points", 7}};
    REQUIRE(run(doc, a) == kExitOk);
    REQUIRE(run(doc, b) == kExitOk);
    CHECK(slurp(a / "janson-flow.csv") == slurp(b / "janson-flow.csv"));
    RunConfig other = config_from_json(doc);
    other.seed = 100;
    CHECK(execute(other).csv != slurp(a / "janson-flow.csv"));
}

TEST_CASE("janson-flow with a constant g is flat") {
    RunConfig cfg = config_from_json(json{{"command", "janson-flow"}, {"g", {3.0}}, {"s_points", 5}});
    const auto out = execute(cfg);
    CHECK(out.exit_code == kExitOk);
    CHECK(out.manifest["verdict"]["worst_delta"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("hy-flow and hy-exp defaults pass; two-point-scan explores the disk") {
    auto hy = execute(config_from_json(json{{"command", "hy-flow"}, {"s_points", 5}}));
    CHECK(hy.exit_code == kExitOk);
    CHECK(hy.manifest["summary"]["phi0"].get<double>() ==
          doctest::Approx(hy.manifest["summary"]["phi1"].get<double>()).epsilon(1e-10));
    auto ex = execute(config_from_json(json{{"command", "hy-exp"}, {"s_points", 5}}));
    CHECK(ex.exit_code == kExitOk);
    CHECK(ex.manifest["summary"]["hy_verify"]["holds"] == true);
    auto tp = execute(config_from_json(json{{"command", "two-point-scan"}, {"mode", "disk"}, {"step", 0.25}}));
    CHECK(tp.exit_code == kExitOk);
    CHECK(tp.manifest["implication_violations"] == 0);
}

TEST_CASE("selftest verdicts do not depend on the seed") {
    for (std::uint64_t seed : {kDefaultSeed, std::uint64_t{1}, std::uint64_t{0xDEADBEEF}}) {
        for (const auto& r : run_selftest(seed)) {
            INFO(r.module << "/" << r.name << ": " << r.detail);
            CHECK(r.passed);
        }
    }
}
