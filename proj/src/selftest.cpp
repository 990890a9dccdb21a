#include "hypflow/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "hypflow/cube_walsh.hpp"
#include "hypflow/flows.hpp"
#include "hypflow/gauss_hermite.hpp"
#include "hypflow/harness.hpp"
#include "hypflow/hausdorff_young.hpp"
#include "hypflow/line_quadrature.hpp"
#include "hypflow/two_point.hpp"

namespace hypflow {

namespace {

struct Check {
    bool passed = true;
    double worst = 0.0;
    std::string detail;

    // Records err against tol; the first failure keeps its label.
    void expect(double err, double tol, const std::string& label) {
        worst = std::max(worst, err);
        if (!(err <= tol) && passed) {
            passed = false;
            std::ostringstream os;
            os << label << ": error " << err << " > " << tol;
            detail = os.str();
        }
    }
    void expect_true(bool ok, const std::string& label) {
        if (!ok && passed) {
            passed = false;
            detail = label;
        }
    }
};

using SuiteFn = std::function<Check(Rng&, double)>;

std::vector<Complex> random_poly(Rng& rng, int degree) {
    std::vector<Complex> a(degree + 1);
    for (auto& c : a) c = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
    return a;
}

// gauss_hermite ------------------------------------------------------------

Check quadrature_exactness(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform() * 20);
        const auto& rule = cached_rule(n);
        for (int m = 0; m <= std::min(2 * n - 1, 24); ++m) {
            const double got = rule.integrate([&](double x) { return std::pow(x, m); });
            const double want = gaussian_moment(m);
            const double scale = rule.integrate([&](double x) { return std::pow(std::abs(x), m); });
            c.expect(std::abs(got - want) / std::max(1.0, scale), 1e-12, "moment");
        }
    }
    return c;
}

Check hermite_orthogonality(Rng&, double) {
    Check c;
    const auto& rule = cached_rule(40);
    for (int j = 0; j <= 12; ++j)
        for (int k = 0; k <= 12; ++k) {
            const Complex v = rule.integrate([&](double x) { return hermite_eval(j, x) * hermite_eval(k, x); });
            const double want = j == k ? factorial(k) : 0.0;
            c.expect(std::abs(v - want) / factorial(std::max(j, k)), 1e-12, "orthogonality");
        }
    return c;
}

Check mehler_semigroup(Rng& rng, double) {
    Check c;
    const auto& rule = cached_rule(96);
    for (int trial = 0; trial < 10; ++trial) {
        const HermiteSeries g{random_poly(rng, 5)};
        const Complex w1 = rng.complex_disk(1.0);
        const Complex w2 = rng.complex_disk(1.0);
        const Complex x(rng.normal(), 0.3 * rng.normal());
        const Complex lhs = mehler_apply_series(w1, mehler_apply_series(w2, g))(x);
        const Complex rhs = mehler_apply_series(w1 * w2, g)(x);
        c.expect(rel_diff(lhs, rhs, 1e-12), 1e-12, "semigroup");
        const double w = rng.uniform(-0.8, 0.8);
        const auto [series, kernel] = mehler_kernel_check(w, g, rng.normal(), rule);
        c.expect(rel_diff(series, kernel, 1e-12), 1e-9, "kernel");
    }
    return c;
}

Check heat_semigroup(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 10; ++trial) {
        const PolySeries h{random_poly(rng, 6)};
        const Complex s1(rng.normal(), rng.normal());
        const Complex s2(rng.normal(), rng.normal());
        const Complex x(rng.normal(), rng.normal());
        const Complex lhs = heat_poly(s1, heat_poly_series(s2, h), x);
        const Complex rhs = heat_poly(s1 + s2, h, x);
        c.expect(rel_diff(lhs, rhs, 1e-9), 1e-11, "P_s P_t = P_{s+t}");
    }
    for (int m = 0; m <= 12; ++m) {
        PolySeries xm{std::vector<Complex>(m + 1, 0.0)};
        xm.coeffs[m] = 1.0;
        const Complex x(rng.normal(), rng.normal());
        c.expect(rel_diff(heat_poly(-1.0, xm, x), hermite_eval(m, x), 1e-9), 1e-11, "P_{-1} x^m = H_m");
    }
    return c;
}

Check basis_round_trip(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 10; ++trial) {
        const PolySeries p{random_poly(rng, 1 + trial)};
        const PolySeries back = to_monomial(to_hermite(p));
        for (std::size_t l = 0; l < p.coeffs.size(); ++l)
            c.expect(std::abs(back.coeffs[l] - p.coeffs[l]), 1e-10, "round trip");
        const Complex x(rng.normal(), rng.normal());
        c.expect(rel_diff(to_hermite(p)(x), p(x), 1e-9), 1e-11, "same function");
    }
    return c;
}

Check mehler_atom(Rng& rng, double) {
    Check c;
    const auto& rule = cached_rule(160);
    for (int trial = 0; trial < 10; ++trial) {
        const GaussianAtom atom{Complex(rng.normal(), rng.normal()), Complex(rng.uniform(0.05, 0.5), rng.normal() * 0.2),
                                Complex(rng.normal() * 0.5, rng.normal() * 0.5)};
        const double w = rng.uniform(-0.9, 0.9);
        const double x = rng.normal();
        const double root = std::sqrt(1.0 - w * w);
        const Complex brute = rule.integrate([&](double y) { return atom(w * x + root * y); });
        c.expect(rel_diff(mehler_apply_atom(w, atom, x), brute, 1e-12), 1e-9, "atom kernel");
    }
    return c;
}

// cube_walsh ---------------------------------------------------------------

Check tzk_symmetric(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 9);
        const SymmetricSpec spec{n, random_poly(rng, std::min(n, 4))};
        const Complex z = rng.complex_disk(1.0);
        const int k = static_cast<int>(rng.uniform() * (n + 1));
        const CubeFunction t = apply_tzk(spec.materialize(), z, k);
        for (int point = 0; point < 6; ++point) {
            const auto mask = static_cast<std::uint32_t>(rng.next_u64() & ((1u << n) - 1));
            const auto x = cube_point(n, mask);
            BlockCounts counts{k, 0, 0};
            for (int j = 0; j < n; ++j) (j < k ? counts.a : counts.b) += x[j] > 0;
            c.expect(rel_diff(walsh_synthesize(t, x), spec.eval_tzk(counts, z), 1e-9), 1e-10, "T_z^k");
        }
    }
    return c;
}

Check collapsed_vs_naive(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 9);
        const SymmetricSpec spec{n, random_poly(rng, std::min(n, 3))};
        const Complex z = rng.complex_disk(1.0);
        const int k = static_cast<int>(rng.uniform() * (n + 1));
        const double p = rng.uniform(1.0, 3.0);
        const double q = p + rng.uniform(0.0, 3.0);
        const auto values = walsh_synthesize_all(apply_tzk(spec.materialize(), z, k));
        const double naive = mixed_norm(values, n, k, p, q);
        c.expect(rel_diff(mixed_norm(collapse_tzk(spec, z, k), p, q), naive, 1e-300), 1e-11, "table");
        c.expect(rel_diff(mixed_norm_collapsed(spec, z, k, p, q), naive, 1e-300), 1e-11, "streaming");
    }
    return c;
}

Check beckner(Rng&, double) {
    Check c;
    for (int l = 1; l <= 5; ++l) {
        double prev = INFINITY;
        for (int n : {8, 16, 32, 64, 128}) {
            const auto e = beckner_expand(n, l);
            c.expect(e.residual, 1e-9, "residual");
            double lower = 0.0;
            for (int m = 0; m < l; ++m) lower = std::max(lower, std::abs(e.coeffs[m]));
            c.expect_true(lower <= prev * (1.0 + 1e-9) + 1e-14, "lower coefficients must shrink with n");
            prev = lower;
        }
    }
    return c;
}

Check round_trip_and_parity(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform() * 10);
        CubeFunction f = CubeFunction::zero(n);
        for (auto& v : f.coeffs) v = Complex(rng.normal(), rng.normal());
        const auto values = walsh_synthesize_all(f);
        const CubeFunction back = walsh_analyze(values);
        for (std::size_t i = 0; i < f.coeffs.size(); ++i) c.expect(std::abs(back.coeffs[i] - f.coeffs[i]), 1e-12, "analysis");
        std::vector<Complex> x(n), minus(n);
        for (int j = 0; j < n; ++j) {
            x[j] = Complex(rng.normal(), rng.normal());
            minus[j] = -x[j];
        }
        for (int l = 0; l <= n; ++l) {
            const double sign = l % 2 == 0 ? 1.0 : -1.0;
            c.expect(rel_diff(phi_symmetric(l, minus), sign * phi_symmetric(l, x), 1e-9), 1e-12, "parity");
        }
    }
    return c;
}

// two_point ----------------------------------------------------------------

ExponentTriple random_triple(Rng& rng) {
    const double p = rng.uniform(1.0, 3.0);
    const double q = p + rng.uniform(0.0, 3.0);
    return ExponentTriple(p, q, rng.complex_disk(1.0));
}

Check invariance(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 20; ++trial) {
        const ExponentTriple t = random_triple(rng);
        const Complex a(rng.normal(), rng.normal());
        const Complex b(rng.normal(), rng.normal());
        const Complex lambda = rng.uniform(0.2, 3.0) * std::exp(Complex(0.0, rng.uniform(0.0, 2.0 * kPi)));
        const auto m1 = two_point_margin(a, b, t);
        const auto m2 = two_point_margin(lambda * a, lambda * b, t);
        c.expect(std::abs(m1.lhs / m1.rhs - m2.lhs / m2.rhs), 1e-12, "scale and phase");
    }
    return c;
}

Check global_implies_infinitesimal(Rng& rng, double) {
    Check c;
    int tested = 0;
    for (int trial = 0; trial < 12; ++trial) {
        const ExponentTriple t = random_triple(rng);
        if (!holds(extremal_ratio(t, scan_budget()))) continue;
        ++tested;
        c.expect(-infinitesimal_scan(t).min_margin, kInfinitesimalTol, "infinitesimal margin");
    }
    c.expect_true(tested > 0, "no draw satisfied the global inequality");
    return c;
}

Check symmetries(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 20; ++trial) {
        const ExponentTriple t = random_triple(rng);
        const Complex b(rng.normal(), rng.normal());
        const double r = two_point_ratio(b, t);
        c.expect(std::abs(two_point_ratio(-b, t) - r), 1e-12, "b -> -b");
        const ExponentTriple tc(t.p, t.q, std::conj(t.z));
        c.expect(std::abs(two_point_ratio(std::conj(b), tc) - r), 1e-12, "conjugation");
    }
    return c;
}

// flows --------------------------------------------------------------------

Check evaluator_agreement(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 10; ++trial) {
        const ExponentTriple t = random_triple(rng);
        const PolySeries g{random_poly(rng, 1 + static_cast<int>(rng.uniform() * 3))};
        const double s = rng.uniform();
        const double m = janson_mehler(g, t, s);
        c.expect(rel_diff(janson_quadrature(g, t, s), m, 1e-300), 1e-8, "quadrature vs Mehler");
        c.expect(rel_diff(janson_heat(gaussian_smooth(g), t, s), m, 1e-300), 1e-8, "heat vs Mehler");
    }
    return c;
}

Check discrete_monotone(Rng& rng, double tol) {
    Check c;
    int tested = 0;
    for (int trial = 0; trial < 8; ++trial) {
        const double p = rng.uniform(1.0, 2.5);
        const double q = p + rng.uniform(0.0, 2.5);
        const double zmax = std::sqrt((p - 1.0) / (q - 1.0 + 1e-300));
        const ExponentTriple t(p, q, rng.uniform(0.0, std::min(1.0, zmax)));
        if (!holds(extremal_ratio(t, scan_budget()))) continue;
        ++tested;
        const int n = 2 + static_cast<int>(rng.uniform() * 7);
        const SymmetricSpec spec{n, random_poly(rng, std::min(n, 3))};
        const FlowReport r = discrete_flow(spec, t, all_ks(n));
        const FlowVerdict v = compute_verdict(r.samples, tol, tol);
        c.expect_true(v.nondecreasing, "discrete flow decreased");
    }
    c.expect_true(tested > 0, "no draw satisfied the precondition");
    return c;
}

Check endpoint_bridge(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 6; ++trial) {
        const ExponentTriple t = random_triple(rng);
        const PolySeries g{random_poly(rng, 1 + static_cast<int>(rng.uniform() * 3))};
        const HermiteSeries gt = gaussian_smooth(g);
        const HermiteSeries mz = mehler_apply_series(t.z, gt);
        const double reach = gaussian_reach(g.degree() * t.q);
        const double j0 = std::pow(gaussian_average([&](double x) { return abs_pow(mz(x), t.q); }, 0.0, 1.0, reach),
                                   t.p / t.q);
        const double j1 =
            gaussian_average([&](double u) { return abs_pow(gt(u), t.p); }, 0.0, 1.0, gaussian_reach(g.degree() * t.p));
        c.expect(rel_diff(janson_mehler(g, t, 0.0), j0, 1e-300), 1e-9, "J(0) = ||M_z g~||_q^p");
        c.expect(rel_diff(janson_mehler(g, t, 1.0), j1, 1e-300), 1e-9, "J(1) = ||g~||_p^p");
    }
    return c;
}

Check collapsed_vs_naive_flow(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 4; ++trial) {
        const ExponentTriple t = random_triple(rng);
        const int n = 2 + static_cast<int>(rng.uniform() * 9);
        const SymmetricSpec spec{n, random_poly(rng, std::min(n, 3))};
        const FlowReport a = discrete_flow(spec.materialize(), t, all_ks(n));
        const FlowReport b = discrete_flow(spec, t, all_ks(n));
        for (std::size_t i = 0; i < a.samples.size(); ++i)
            c.expect(rel_diff(a.samples[i].value, b.samples[i].value, 1e-300), 1e-11, "row");
    }
    return c;
}

// hausdorff_young ----------------------------------------------------------

Check gaussian_constant(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 3; ++trial) {
        const double p = rng.uniform(1.05, 2.0);
        const HYInput in(PolyGaussian{PolySeries{{1.0}}, GaussianAtom{1.0, kPi, 0.0}}, p);
        const FlowReport r = phi_flow(in, default_s_grid(11));
        const auto [lo, hi] = std::minmax_element(r.samples.begin(), r.samples.end(),
                                                  [](const FlowSample& x, const FlowSample& y) { return x.value < y.value; });
        c.expect((hi->value - lo->value) / hi->value, 1e-9, "Gaussian flow must be constant");
    }
    return c;
}

Check atom_bridge(Rng& rng, double) {
    Check c;
    for (int trial = 0; trial < 6; ++trial) {
        const double p = rng.uniform(1.05, 2.0);
        const HYInput in(HermiteSeries{random_poly(rng, static_cast<int>(rng.uniform() * 3))}, p);
        const ExponentTriple t(in.p(), in.q(), in.z());
        const double s = rng.uniform();
        const double mehler = janson_mehler(PolySeries{in.hermite()->coeffs}, t, s);
        c.expect(rel_diff(janson_atom(in.g_tilde(), t, s), mehler, 1e-300), 1e-8, "atom path vs Mehler");
    }
    return c;
}

Check substitution(Rng& rng, double) {
    Check c;
    std::vector<double> ys;
    for (int i = 0; i < 16; ++i) ys.push_back(rng.uniform(-4.0, 4.0));
    for (int trial = 0; trial < 6; ++trial) {
        const double p = rng.uniform(1.05, 2.0);
        const HYInput h(HermiteSeries{random_poly(rng, 3)}, p);
        c.expect(substitution_error(h, ys), 1e-12, "Hermite input");
        const HYInput back(h.f(), p);
        for (double y : ys) c.expect(rel_diff(back.g_tilde()(y), (*h.hermite())(y), 1e-9), 1e-11, "round trip");
    }
    return c;
}

Check lemmas(Rng& rng, double) {
    Check c;
    const auto& rule = cached_rule(96);
    for (int trial = 0; trial < 50; ++trial) {
        const Complex zeta(rng.normal(), rng.normal());
        const Complex x(rng.normal(), rng.normal());
        const auto [qa, ca] = lemma_a_check(zeta, x, rule);
        c.expect(rel_diff(qa, ca, 1e-12), 1e-10, "Gaussian average of an exponential");
        const double p = rng.uniform(1.05, 2.0);
        const auto [qf, cf] = lemma_f_check(rng.uniform(-2.0, 2.0), p, rng.uniform(-1.5, 1.5), rule);
        c.expect(std::abs(qf - cf), 1e-10, "transform of an exponential atom");
    }
    return c;
}

// cli_harness --------------------------------------------------------------

Check determinism(Rng& rng, double) {
    Check c;
    RunConfig cfg;
    cfg.command = "discrete-flow";
    cfg.seed = rng.next_u64();
    cfg.params = {{"n", 6}, {"random_degree", 3}};
    const RunOutcome a = execute(cfg);
    const RunOutcome b = execute(cfg);
    c.expect_true(a.csv == b.csv, "reruns with one seed differ");
    return c;
}

Check exit_codes(Rng&, double) {
    Check c;
    RunConfig ok;
    ok.command = "discrete-flow";
    ok.params = {{"n", 4}};
    c.expect_true(execute(ok).exit_code == kExitOk, "valid run must exit 0");
    RunConfig strict;
    strict.command = "converge";
    strict.params = {{"n_list", {16, 32, 64}}, {"max_slope", -3.0}};
    c.expect_true(execute(strict).exit_code == kExitViolation, "unmet slope must exit 2");
    RunConfig unknown;
    unknown.command = "no-such-command";
    bool rejected = false;
    try {
        execute(unknown);
    } catch (const InputError&) {
        rejected = true;
    }
    c.expect_true(rejected, "unknown command must be a usage error");
    return c;
}

}  // namespace

std::vector<SuiteResult> run_selftest(std::uint64_t seed, double tol) {
    const std::vector<std::tuple<const char*, const char*, SuiteFn>> suites = {
        {"gauss_hermite", "quadrature_exactness", quadrature_exactness},
        {"gauss_hermite", "hermite_orthogonality", hermite_orthogonality},
        {"gauss_hermite", "mehler_semigroup", mehler_semigroup},
        {"gauss_hermite", "heat_semigroup", heat_semigroup},
        {"gauss_hermite", "basis_round_trip", basis_round_trip},
        {"gauss_hermite", "mehler_atom", mehler_atom},
        {"cube_walsh", "tzk_symmetric", tzk_symmetric},
        {"cube_walsh", "collapsed_vs_naive", collapsed_vs_naive},
        {"cube_walsh", "beckner", beckner},
        {"cube_walsh", "round_trip_and_parity", round_trip_and_parity},
        {"two_point", "invariance", invariance},
        {"two_point", "global_implies_infinitesimal", global_implies_infinitesimal},
        {"two_point", "symmetries", symmetries},
        {"flows", "evaluator_agreement", evaluator_agreement},
        {"flows", "discrete_monotone", discrete_monotone},
        {"flows", "endpoint_bridge", endpoint_bridge},
        {"flows", "collapsed_vs_naive_flow", collapsed_vs_naive_flow},
        {"hausdorff_young", "gaussian_constant", gaussian_constant},
        {"hausdorff_young", "atom_bridge", atom_bridge},
        {"hausdorff_young", "substitution", substitution},
        {"hausdorff_young", "lemmas", lemmas},
        {"cli_harness", "determinism", determinism},
        {"cli_harness", "exit_codes", exit_codes},
    };
    Rng root(seed);
    std::vector<SuiteResult> out;
    for (const auto& [module, name, fn] : suites) {
        Rng rng = root.split();
        SuiteResult r{module, name, false, "", 0.0};
        const auto start = std::chrono::steady_clock::now();
        try {
            const Check c = fn(rng, tol);
            r.passed = c.passed;
            if (c.passed) {
                std::ostringstream os;
                os << "worst " << c.worst;
                r.detail = os.str();
            } else {
                r.detail = c.detail;
            }
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace hypflow
