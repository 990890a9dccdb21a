#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "hypflow/common.hpp"
#include "hypflow/harness.hpp"

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> nodes;
    std::optional<double> tol;
    std::vector<std::string> sets;
};

void add_flags(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON config file");
    app->add_option("--out", f.out, "Output directory");
    app->add_option("--seed", f.seed, "PRNG seed");
    app->add_option("--nodes", f.nodes, "Fixed Gauss-Hermite node count (0 = adaptive)");
    app->add_option("--tol", f.tol, "Monotonicity tolerance");
    app->add_option("--set", f.sets, "Parameter override key=JSON (repeatable)");
}

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw hypflow::InputError("cannot read config file " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw hypflow::InputError("config file " + path + ": " + e.what());
    }
}

hypflow::RunConfig build_config(const std::string& command, const Flags& f) {
    nlohmann::json doc = f.config.empty() ? nlohmann::json::object() : load_config(f.config);
    if (!doc.is_object()) throw hypflow::InputError("config must be a JSON object");
    if (!command.empty()) doc["command"] = command;
    for (const auto& s : f.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw hypflow::InputError("--set expects key=value, got " + s);
        const std::string key = s.substr(0, eq);
        const std::string value = s.substr(eq + 1);
        try {
            doc[key] = nlohmann::json::parse(value);
        } catch (const nlohmann::json::exception&) {
            doc[key] = value;
        }
    }
    hypflow::RunConfig cfg = hypflow::config_from_json(doc);
    if (!f.out.empty()) cfg.out_dir = f.out;
    if (f.seed) cfg.seed = *f.seed;
    if (f.nodes) {
        if (*f.nodes < 0 || *f.nodes > 512) throw hypflow::InputError("--nodes must lie in [0, 512]");
        cfg.nodes = *f.nodes;
    }
    if (f.tol) {
        if (!(*f.tol >= 0.0)) throw hypflow::InputError("--tol must be nonnegative");
        cfg.tol = *f.tol;
    }
    if (cfg.command.empty()) throw hypflow::InputError("no subcommand given");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monotone flows for hypercontractivity and Hausdorff-Young"};
    app.set_version_flag("--version", HYPFLOW_VERSION);
    app.require_subcommand(1);

    Flags flags;
    std::string chosen;
    auto* run = app.add_subcommand("run", "Run the subcommand named in --config");
    add_flags(run, flags);
    run->callback([&] { chosen.clear(); });
    for (const auto& name : hypflow::command_names()) {
        auto* sub = app.add_subcommand(name, "Run " + name);
        add_flags(sub, flags);
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? hypflow::kExitOk : hypflow::kExitUsage;
    }

    hypflow::RunConfig cfg;
    try {
        cfg = build_config(chosen, flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return hypflow::kExitUsage;
    }
    return hypflow::run_command(cfg, std::cerr);
}
