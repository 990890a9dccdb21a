#pragma once

// Subcommand dispatch, configuration and run manifests.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace hypflow {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

struct RunConfig {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = kDefaultSeed;
    int nodes = 0;       // fixed Gauss-Hermite rule; 0 = adaptive
    double tol = 1e-10;  // monotonicity tolerance (absolute and relative)

    nlohmann::json to_json() const;
};

/// Builds a config from a JSON document. Recognized top-level keys: command,
/// seed, nodes, tol, out; anything else is a command parameter. Throws
/// InputError on malformed values.
RunConfig config_from_json(const nlohmann::json& doc);

struct RunOutcome {
    int exit_code = kExitOk;
    std::string csv;
    nlohmann::json manifest;
};

/// Runs a subcommand without touching the file system. Configuration errors
/// surface as InputError / DomainError.
RunOutcome execute(const RunConfig& config);

/// execute() plus <out>/<command>.csv and <out>/<command>.manifest.json.
/// Returns the exit status; diagnostics go to `log`.
int run_command(const RunConfig& config, std::ostream& log);

const std::vector<std::string>& command_names();

}  // namespace hypflow
