#include "hypflow/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <set>

#include "hypflow/hausdorff_young.hpp"
#include "hypflow/report.hpp"
#include "hypflow/selftest.hpp"

namespace hypflow {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevel = {"command", "seed", "nodes", "tol", "out"};

void check_keys(const json& params, std::initializer_list<const char*> allowed, const std::string& command) {
    for (const auto& [key, value] : params.items()) {
        (void)value;
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw InputError(command + ": unknown parameter '" + key + "'");
    }
}

double get_double(const json& params, const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    const json& v = params.at(key);
    if (!v.is_number()) throw InputError(std::string("parameter '") + key + "' must be a number");
    return v.get<double>();
}

int get_int(const json& params, const char* key, int fallback) {
    if (!params.contains(key)) return fallback;
    const json& v = params.at(key);
    if (!v.is_number_integer()) throw InputError(std::string("parameter '") + key + "' must be an integer");
    return v.get<int>();
}

bool get_bool(const json& params, const char* key, bool fallback) {
    if (!params.contains(key)) return fallback;
    const json& v = params.at(key);
    if (!v.is_boolean()) throw InputError(std::string("parameter '") + key + "' must be a boolean");
    return v.get<bool>();
}

std::string get_string(const json& params, const char* key, const std::string& fallback) {
    if (!params.contains(key)) return fallback;
    const json& v = params.at(key);
    if (!v.is_string()) throw InputError(std::string("parameter '") + key + "' must be a string");
    return v.get<std::string>();
}

// A complex number is written as a number, [re, im] or {"re": .., "im": ..}.
Complex parse_complex(const json& v) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    if (v.is_object() && v.contains("re") && v.contains("im") && v["re"].is_number() && v["im"].is_number())
        return {v["re"].get<double>(), v["im"].get<double>()};
    throw InputError("malformed complex number: " + v.dump());
}

std::vector<Complex> parse_complex_list(const json& v) {
    if (!v.is_array()) throw InputError("expected an array of coefficients");
    std::vector<Complex> out;
    for (const auto& e : v) out.push_back(parse_complex(e));
    return out;
}

Complex get_complex(const json& params, const char* key, Complex fallback) {
    return params.contains(key) ? parse_complex(params.at(key)) : fallback;
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

std::vector<double> parse_s_grid(const json& params, int default_points) {
    if (params.contains("s_grid")) {
        const json& g = params.at("s_grid");
        if (!g.is_array()) throw InputError("s_grid must be an array");
        std::vector<double> out;
        for (const auto& e : g) {
            if (!e.is_number()) throw InputError("s_grid entries must be numbers");
            out.push_back(e.get<double>());
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (!(out[i] >= 0.0 && out[i] <= 1.0)) throw InputError("s_grid entries must lie in [0, 1]");
            if (i > 0 && !(out[i] > out[i - 1])) throw InputError("s_grid must be strictly increasing");
        }
        return out;
    }
    return default_s_grid(get_int(params, "s_points", default_points));
}

std::vector<Complex> random_coefficients(Rng& rng, int degree) {
    if (degree < 0 || degree > 16) throw InputError("random_degree must lie in [0, 16]");
    std::vector<Complex> a(degree + 1);
    for (auto& c : a) c = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
    return a;
}

json verdict_json(const FlowVerdict& v) {
    json j = {{"nondecreasing", v.nondecreasing}, {"worst_delta", v.worst_delta}};
    if (!v.nondecreasing) {
        j["violated_at"] = v.violated_at;
        j["deficit"] = v.deficit;
    }
    return j;
}

void retolerance(FlowReport& r, double tol) {
    r.tol_abs = tol;
    r.tol_rel = tol;
    r.verdict = compute_verdict(r.samples, tol, tol);
}

double sample_at(const FlowReport& r, double s, const std::function<double()>& fallback) {
    for (const auto& smp : r.samples)
        if (smp.parameter == s) return smp.value;
    return fallback();
}

JansonOptions janson_opts(const RunConfig& c) {
    JansonOptions o;
    o.nodes = c.nodes;
    return o;
}

RunOutcome cmd_two_point(const RunConfig& c) {
    const json& P = c.params;
    check_keys(P, {"p", "q", "mode", "step", "threshold", "budget"}, c.command);
    const double p = get_double(P, "p", 2.0);
    const double q = get_double(P, "q", 4.0);
    const std::string mode = get_string(P, "mode", "real");
    if (mode != "real" && mode != "disk") throw InputError("two-point-scan: mode must be 'real' or 'disk'");
    const bool real = mode == "real";
    const double step = get_double(P, "step", real ? 0.05 : 0.1);
    const std::string budget_name = get_string(P, "budget", real ? "full" : "scan");
    if (budget_name != "full" && budget_name != "scan") throw InputError("two-point-scan: budget must be 'full' or 'scan'");
    const SearchBudget budget = budget_name == "full" ? SearchBudget{} : scan_budget();

    const auto cells = real ? real_axis_scan(p, q, step, budget) : region_scan(p, q, step, budget);
    RunOutcome out;
    out.csv = region_csv(cells).str();
    int failures = 0;
    int implication_violations = 0;
    json witness;
    for (const auto& cell : cells) {
        if (!cell.global_holds) ++failures;
        if (cell.global_holds && !cell.infinitesimal_holds) {
            if (implication_violations++ == 0)
                witness = {{"z", complex_json(cell.z)}, {"infinitesimal_margin_min", cell.infinitesimal_margin_min}};
        }
    }
    out.manifest["cells"] = cells.size();
    out.manifest["global_failures"] = failures;
    out.manifest["implication_violations"] = implication_violations;
    if (real && get_bool(P, "threshold", true))
        out.manifest["real_failure_threshold"] = real_failure_threshold(p, q, 0.01, 1e-4, budget);
    if (implication_violations > 0) {
        out.manifest["witness"] = witness;
        out.exit_code = kExitViolation;
    }
    out.manifest["verdict"] = implication_violations == 0 ? "global-implies-infinitesimal" : "violated";
    return out;
}

RunOutcome cmd_discrete(const RunConfig& c) {
    const json& P = c.params;
    check_keys(P, {"n", "p", "q", "z", "a", "random_degree", "backend", "ks"}, c.command);
    const int n = get_int(P, "n", 6);
    if (n < 1) throw InputError("discrete-flow: n must be positive");
    const ExponentTriple t(get_double(P, "p", 2.0), get_double(P, "q", 4.0), get_complex(P, "z", 0.5));
    Rng rng(c.seed);
    std::vector<Complex> a;
    if (P.contains("a"))
        a = parse_complex_list(P.at("a"));
    else if (P.contains("random_degree"))
        a = random_coefficients(rng, get_int(P, "random_degree", 3));
    else
        a = {0.0, 1.0, 1.0};
    std::vector<int> ks = all_ks(n);
    if (P.contains("ks")) ks = P.at("ks").get<std::vector<int>>();
    const std::string backend = get_string(P, "backend", n <= 12 ? "enumerate" : "collapsed");
    if (backend != "enumerate" && backend != "collapsed")
        throw InputError("discrete-flow: backend must be 'enumerate' or 'collapsed'");
    if (backend == "enumerate" && n > kMaxEnumerationDim) throw InputError("discrete-flow: enumeration needs n <= 24");

    const SymmetricSpec spec{n, a};
    FlowReport report = backend == "enumerate" ? discrete_flow(spec.materialize(), t, ks) : discrete_flow(spec, t, ks);
    retolerance(report, c.tol);
    const ExtremalResult pre = extremal_ratio(t);

    RunOutcome out;
    out.csv = flow_csv(report).str();
    out.manifest["backend"] = backend;
    out.manifest["precondition"] = {{"sup_ratio", pre.sup_ratio}, {"holds", holds(pre)}, {"witness_b", complex_json(pre.b)}};
    out.manifest["verdict"] = verdict_json(report.verdict);
    out.manifest["asserted"] = holds(pre);
    if (holds(pre) && !report.verdict.nondecreasing) out.exit_code = kExitViolation;
    return out;
}

RunOutcome cmd_janson(const RunConfig& c) {
    const json& P = c.params;
    check_keys(P, {"g", "random_degree", "p", "q", "z", "s_points", "s_grid", "evaluator", "spot_checks"}, c.command);
    const double p = get_double(P, "p", 4.0 / 3.0);
    const ExponentTriple t(p, get_double(P, "q", 4.0), get_complex(P, "z", Complex(0.0, std::sqrt(p - 1.0))));
    Rng rng(c.seed);
    std::vector<Complex> g;
    if (P.contains("g"))
        g = parse_complex_list(P.at("g"));
    else if (P.contains("random_degree"))
        g = random_coefficients(rng, get_int(P, "random_degree", 3));
    else
        g = {1.0, 2.0, 0.0, 1.0};
    const std::string ev = get_string(P, "evaluator", "mehler");
    Evaluator e;
    if (ev == "mehler")
        e = Evaluator::Mehler;
    else if (ev == "quadrature")
        e = Evaluator::Quadrature;
    else if (ev == "heat")
        e = Evaluator::Heat;
    else
        throw InputError("janson-flow: evaluator must be mehler, quadrature or heat");
    const auto grid = parse_s_grid(P, 21);

    RunOutcome out;
    out.manifest["evaluator"] = ev;
    try {
        FlowReport report = janson_flow(PolySeries{g}, t, grid, e, get_bool(P, "spot_checks", true), janson_opts(c));
        retolerance(report, c.tol);
        out.csv = flow_csv(report).str();
        out.manifest["verdict"] = verdict_json(report.verdict);
        if (!report.verdict.nondecreasing) out.exit_code = kExitViolation;
    } catch (const EvaluatorMismatch& err) {
        out.csv = flow_csv(FlowReport{}).str();
        out.manifest["verdict"] = "evaluator-mismatch";
        out.manifest["witness"] = err.what();
        out.exit_code = kExitViolation;
    }
    return out;
}

RunOutcome cmd_converge(const RunConfig& c) {
    const json& P = c.params;
    check_keys(P, {"a", "p", "q", "z", "s", "n_list", "max_slope"}, c.command);
    const double p = get_double(P, "p", 4.0 / 3.0);
    const ExponentTriple t(p, get_double(P, "q", 4.0), get_complex(P, "z", Complex(0.0, std::sqrt(p - 1.0))));
    const std::vector<Complex> a = P.contains("a") ? parse_complex_list(P.at("a")) : std::vector<Complex>{0.0, 1.0, 0.0, 1.0};
    const std::vector<int> n_list =
        P.contains("n_list") ? P.at("n_list").get<std::vector<int>>() : std::vector<int>{64, 256, 1024, 4096};
    const double s = get_double(P, "s", 0.5);
    const double max_slope = get_double(P, "max_slope", -0.4);

    const ConvergenceTable table = convergence_experiment(a, t, s, n_list, janson_opts(c));
    RunOutcome out;
    out.csv = convergence_csv(table).str();
    bool decreasing = true;
    double prev = INFINITY;
    for (const auto& r : table.rows) {
        if (r.abs_error <= 1e-13) continue;
        if (!(r.abs_error < prev)) decreasing = false;
        prev = r.abs_error;
    }
    const bool slope_ok = !table.slope || *table.slope <= max_slope;
    out.manifest["slope"] = table.slope ? json(*table.slope) : json(nullptr);
    out.manifest["max_slope"] = max_slope;
    out.manifest["errors_decreasing"] = decreasing;
    out.manifest["verdict"] = decreasing && slope_ok ? "converging" : "violated";
    if (!decreasing || !slope_ok) out.exit_code = kExitViolation;
    return out;
}

HYInput parse_hy_input(const json& P, double p) {
    if (!P.contains("input")) return HYInput(PolyGaussian{PolySeries{{1.0}}, GaussianAtom{1.0, kPi, 0.0}}, p);
    const json& in = P.at("input");
    if (!in.is_object()) throw InputError("hy-flow: input must be an object");
    if (in.contains("hermite")) return HYInput(HermiteSeries{parse_complex_list(in.at("hermite"))}, p);
    PolyGaussian f{PolySeries{in.contains("poly") ? parse_complex_list(in.at("poly")) : std::vector<Complex>{1.0}},
                   GaussianAtom{in.contains("amplitude") ? parse_complex(in.at("amplitude")) : Complex(1.0),
                                in.contains("quad") ? parse_complex(in.at("quad")) : Complex(kPi),
                                in.contains("lin") ? parse_complex(in.at("lin")) : Complex(0.0)}};
    return HYInput(f, p);
}

RunOutcome cmd_hy_flow(const RunConfig& c) {
    const json& P = c.params;
    check_keys(P, {"p", "input", "s_points", "s_grid"}, c.command);
    const HYInput in = parse_hy_input(P, get_double(P, "p", 4.0 / 3.0));
    const auto grid = parse_s_grid(P, 21);
    const JansonOptions opts = janson_opts(c);
    FlowReport report = phi_flow(in, grid, opts);
    retolerance(report, c.tol);
    const auto [fhat_q, scaled_f_p] = hy_endpoints(in);
    const bool hy_holds = fhat_q <= scaled_f_p * (1.0 + 1e-8) + 1e-14;

    RunOutcome out;
    out.csv = flow_csv(report).str();
    out.manifest["summary"] = {
        {"p", in.p()},
        {"q", in.q()},
        {"z", complex_json(in.z())},
        {"phi0", sample_at(report, 0.0, [&] { return phi_value(in, 0.0, opts); })},
        {"phi1", sample_at(report, 1.0, [&] { return phi_value(in, 1.0, opts); })},
        {"constant", hy_constant(in.p())},
        {"norm_fhat_q", fhat_q},
        {"scaled_norm_f_p", scaled_f_p},
        {"hausdorff_young_holds", hy_holds},
        {"verdict", verdict_json(report.verdict)}};
    if (!report.verdict.nondecreasing || !hy_holds) out.exit_code = kExitViolation;
    return out;
}

RunOutcome cmd_hy_exp(const RunConfig& c) {
    const json& P = c.params;
    check_keys(P, {"p", "atoms", "random_atoms", "s_points", "s_grid"}, c.command);
    const double p = get_double(P, "p", 4.0 / 3.0);
    Rng rng(c.seed);
    ExpFamily fam;
    if (P.contains("atoms")) {
        const json& atoms = P.at("atoms");
        if (!atoms.is_array()) throw InputError("hy-exp: atoms must be an array");
        for (const auto& a : atoms) {
            if (!a.is_object() || !a.contains("c") || !a.contains("t"))
                throw InputError("hy-exp: each atom needs fields c and t");
            fam.atoms.push_back({parse_complex(a.at("c")), parse_complex(a.at("t"))});
        }
    } else if (P.contains("random_atoms")) {
        const int m = get_int(P, "random_atoms", 3);
        if (m < 0 || m > 32) throw InputError("hy-exp: random_atoms must lie in [0, 32]");
        for (int i = 0; i < m; ++i) fam.atoms.push_back({Complex(rng.normal(), rng.normal()), rng.uniform(-2.0, 2.0)});
    } else {
        fam.atoms = {{1.0, 0.5}, {-0.3, -1.1}};
    }
    const auto grid = parse_s_grid(P, 11);
    ExpFlowResult res = exp_flow_phi(fam, p, grid);
    retolerance(res.report, c.tol);
    const bool real_t = std::all_of(fam.atoms.begin(), fam.atoms.end(), [](const ExpAtom& a) { return a.t.imag() == 0.0; });
    const double q = p / (p - 1.0);

    RunOutcome out;
    out.csv = flow_csv(res.report).str();
    json summary = {{"p", p},
                    {"q", q},
                    {"z", complex_json(Complex(0.0, std::sqrt(p / q)))},
                    {"nesting", "inner average over u (z variable), outer over x"},
                    {"phi0", res.phi0},
                    {"phi1", res.phi1},
                    {"phi0_closed", res.phi0_closed},
                    {"phi1_closed", res.phi1_closed},
                    {"endpoints_ordered", res.endpoints_ordered},
                    {"constant", hy_constant(p)},
                    {"verdict", verdict_json(res.report.verdict)}};
    bool ok = res.endpoints_ordered && res.report.verdict.nondecreasing;
    if (real_t) {
        const HYVerify v = hy_verify(fam, p);
        summary["hy_verify"] = {{"lhs", v.lhs}, {"rhs", v.rhs}, {"holds", v.holds}};
        ok = ok && v.holds;
    }
    out.manifest["summary"] = summary;
    if (!ok) out.exit_code = kExitViolation;
    return out;
}

RunOutcome cmd_selftest(const RunConfig& c) {
    check_keys(c.params, {}, c.command);
    const auto results = run_selftest(c.seed, c.tol);
    CsvTable t;
    t.header = {"module", "suite", "passed", "detail"};
    json suites = json::array();
    bool all = true;
    for (const auto& r : results) {
        t.rows.push_back({r.module, r.name, r.passed ? "1" : "0", r.detail});
        suites.push_back({{"module", r.module}, {"suite", r.name}, {"passed", r.passed}, {"seconds", r.seconds}});
        all = all && r.passed;
    }
    RunOutcome out;
    out.csv = t.str();
    out.manifest["suites"] = suites;
    out.manifest["verdict"] = all ? "all-passed" : "failed";
    if (!all) out.exit_code = kExitViolation;
    return out;
}

}  // namespace

json RunConfig::to_json() const {
    return {{"command", command}, {"params", params}, {"out", out_dir.string()},
            {"seed", seed},       {"nodes", nodes},   {"tol", tol}};
}

RunConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw InputError("config must be a JSON object");
    RunConfig c;
    for (const auto& [key, value] : doc.items()) {
        if (kTopLevel.count(key) == 0) c.params[key] = value;
    }
    if (doc.contains("command")) {
        if (!doc["command"].is_string()) throw InputError("config: command must be a string");
        c.command = doc["command"].get<std::string>();
    }
    if (doc.contains("seed")) {
        const json& s = doc["seed"];
        if (s.is_number_unsigned() || (s.is_number_integer() && s.get<std::int64_t>() >= 0))
            c.seed = s.get<std::uint64_t>();
        else if (s.is_string())
            c.seed = std::stoull(s.get<std::string>(), nullptr, 0);
        else
            throw InputError("config: seed must be a nonnegative integer or a string");
    }
    if (doc.contains("nodes")) {
        if (!doc["nodes"].is_number_integer()) throw InputError("config: nodes must be an integer");
        c.nodes = doc["nodes"].get<int>();
        if (c.nodes < 0 || c.nodes > kMaxNodes) throw InputError("config: nodes must lie in [0, 512]");
    }
    if (doc.contains("tol")) {
        if (!doc["tol"].is_number()) throw InputError("config: tol must be a number");
        c.tol = doc["tol"].get<double>();
        if (!(c.tol >= 0.0)) throw InputError("config: tol must be nonnegative");
    }
    if (doc.contains("out")) {
        if (!doc["out"].is_string()) throw InputError("config: out must be a string");
        c.out_dir = doc["out"].get<std::string>();
    }
    return c;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"two-point-scan", "discrete-flow", "janson-flow", "converge",
                                                   "hy-flow",        "hy-exp",        "selftest"};
    return names;
}

RunOutcome execute(const RunConfig& config) {
    if (config.command == "two-point-scan") return cmd_two_point(config);
    if (config.command == "discrete-flow") return cmd_discrete(config);
    if (config.command == "janson-flow") return cmd_janson(config);
    if (config.command == "converge") return cmd_converge(config);
    if (config.command == "hy-flow") return cmd_hy_flow(config);
    if (config.command == "hy-exp") return cmd_hy_exp(config);
    if (config.command == "selftest") return cmd_selftest(config);
    throw InputError("unknown subcommand '" + config.command + "'");
}

int run_command(const RunConfig& config, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    RunOutcome out;
    try {
        out = execute(config);
    } catch (const InputError& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const json::exception& e) {
        log << "error: malformed config: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const AccuracyError& e) {
        log << "error: " << e.what() << '\n';
        out.exit_code = kExitViolation;
        out.manifest["verdict"] = "accuracy-error";
        out.manifest["witness"] = e.what();
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.manifest["command"] = config.command;
    out.manifest["version"] = HYPFLOW_VERSION;
    out.manifest["config"] = config.to_json();
    out.manifest["wall_time_s"] = wall;
    out.manifest["exit_code"] = out.exit_code;
    try {
        std::filesystem::create_directories(config.out_dir);
        const auto csv_path = config.out_dir / (config.command + ".csv");
        const auto manifest_path = config.out_dir / (config.command + ".manifest.json");
        out.manifest["files"] = {{"csv", csv_path.string()}, {"manifest", manifest_path.string()}};
        write_file(csv_path, out.csv);
        write_file(manifest_path, out.manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    log << config.command << ": exit " << out.exit_code << '\n';
    return out.exit_code;
}

}  // namespace hypflow
