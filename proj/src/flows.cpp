#include "hypflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "hypflow/line_quadrature.hpp"

namespace hypflow {

FlowVerdict compute_verdict(const std::vector<FlowSample>& samples, double tol_abs, double tol_rel) {
    FlowVerdict v;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double prev = samples[i - 1].value;
        const double delta = samples[i].value - prev;
        if (i == 1 || delta < v.worst_delta) v.worst_delta = delta;
        if (v.nondecreasing && samples[i].value < prev - (tol_abs + tol_rel * std::abs(prev))) {
            v.nondecreasing = false;
            v.violated_at = static_cast<int>(i);
            v.deficit = delta;
        }
    }
    return v;
}

FlowReport make_flow_report(std::string parameter_name, std::vector<FlowSample> samples, double tol_abs,
                            double tol_rel) {
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].parameter > samples[i - 1].parameter))
            throw InputError("make_flow_report: parameters must be strictly increasing");
    FlowReport r;
    r.parameter_name = std::move(parameter_name);
    r.samples = std::move(samples);
    r.tol_abs = tol_abs;
    r.tol_rel = tol_rel;
    r.verdict = compute_verdict(r.samples, tol_abs, tol_rel);
    return r;
}

std::vector<int> all_ks(int n) {
    std::vector<int> ks(n + 1);
    std::iota(ks.begin(), ks.end(), 0);
    return ks;
}

namespace {

void prepare_ks(std::vector<int>& ks, int n) {
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    for (int k : ks)
        if (k < 0 || k > n) throw InputError("discrete_flow: k must lie in [0, n]");
}

}  // namespace

FlowReport discrete_flow(const CubeFunction& f, const ExponentTriple& t, std::vector<int> ks) {
    prepare_ks(ks, f.n);
    std::vector<FlowSample> samples(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) {
        const auto values = walsh_synthesize_all(apply_tzk(f, t.z, ks[i]));
        samples[i] = {static_cast<double>(ks[i]), mixed_norm(values, f.n, ks[i], t.p, t.q)};
    });
    return make_flow_report("k", std::move(samples));
}

FlowReport discrete_flow(const SymmetricSpec& f, const ExponentTriple& t, std::vector<int> ks) {
    prepare_ks(ks, f.n);
    std::vector<FlowSample> samples(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) {
        samples[i] = {static_cast<double>(ks[i]), mixed_norm_collapsed(f, t.z, ks[i], t.p, t.q)};
    });
    return make_flow_report("k", std::move(samples));
}

namespace {

constexpr int kStartNodes = 32;
// Doubling stops here at both levels; unsettled sums go to the line rule.
constexpr int kNodeCap = 256;

// Fixed-rule form: outer (u) and inner (x) Gauss-Hermite sums of |G|^q.
template <class G>
double nested_norm(G&& inner, const ExponentTriple& t, const QuadratureRule& rule) {
    const double pq = t.p / t.q;
    double total = 0.0;
    for (int i = 0; i < rule.node_count; ++i) {
        const double u = rule.nodes[i];
        double acc = 0.0;
        for (int j = 0; j < rule.node_count; ++j) acc += rule.weights[j] * abs_pow(inner(u, rule.nodes[j]), t.q);
        total += rule.weights[i] * std::pow(acc, pq);
    }
    return total;
}

// G(u, x) = H(alpha u + beta x). |G| is rough only near the real segments
// closest to the roots of H, so the line rules cut exactly there.
struct ZeroSet {
    double alpha = 0.0;
    Complex beta{};
    std::vector<Complex> roots;

    // x nearest to each root for fixed u.
    std::vector<double> inner_cuts(double u) const {
        std::vector<double> cuts;
        const double bb = std::norm(beta);
        if (bb == 0.0) return cuts;
        for (const Complex& r : roots) cuts.push_back((std::conj(beta) * (r - alpha * u)).real() / bb);
        return cuts;
    }

    // u at which the line u -> {alpha u + beta x} passes through a root.
    std::vector<double> outer_cuts() const {
        std::vector<double> cuts;
        if (alpha == 0.0) return cuts;
        if (std::abs(beta) == 0.0) {
            for (const Complex& r : roots) cuts.push_back(r.real() / alpha);
        } else if (std::abs(beta.imag()) > 1e-14 * std::abs(beta)) {
            for (const Complex& r : roots) cuts.push_back((std::conj(beta) * r).imag() / (-alpha * beta.imag()));
        }
        return cuts;
    }
};

std::vector<Complex> poly_roots(const PolySeries& h) {
    std::vector<Complex> c = h.coeffs;
    while (!c.empty() && c.back() == Complex{}) c.pop_back();
    const int d = static_cast<int>(c.size()) - 1;
    if (d < 1) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -c[i] / c[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    const auto& ev = solver.eigenvalues();
    return std::vector<Complex>(ev.data(), ev.data() + d);
}

ZeroSet make_zero_set(const PolySeries& h, double alpha, Complex beta) { return {alpha, beta, poly_roots(h)}; }

// E_x |G(u, sd x)|^q by Gauss-Hermite doubling; if the nodes do not settle
// (|G| has a real zero in x) the line rule takes over.
template <class G>
double inner_average(G&& inner, const ZeroSet& zeros, double u, double sd, double q, double reach,
                     const JansonOptions& opts) {
    auto at_nodes = [&](int n) {
        const QuadratureRule& rule = cached_rule(n);
        double acc = 0.0;
        for (int j = 0; j < rule.node_count; ++j) acc += rule.weights[j] * abs_pow(inner(u, sd * rule.nodes[j]), q);
        return acc;
    };
    double prev = at_nodes(kStartNodes);
    for (int n = 2 * kStartNodes; n <= kNodeCap; n *= 2) {
        const double cur = at_nodes(n);
        if (std::abs(cur - prev) <= opts.rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    return gaussian_average([&](double x) { return abs_pow(inner(u, x), q); }, 0.0, sd, reach,
                            zeros.inner_cuts(u));
}

// J = E_u (E_x |G(su u, sx x)|^q)^{p/q} with standard Gaussian u, x.
// The outer average tries Gauss-Hermite doubling first. (...)^{p/q} has a kink
// wherever the inner average vanishes, e.g. at real roots of g~ when s = 1;
// there the doubling does not settle and the line rule takes over.
template <class G>
double janson_nested(G&& inner, const ZeroSet& zeros, const ExponentTriple& t, int degree, double su, double sx,
                     const JansonOptions& opts) {
    const double pq = t.p / t.q;
    const double reach_x = gaussian_reach(degree * t.q);
    auto outer = [&](double u) { return std::pow(inner_average(inner, zeros, u, sx, t.q, reach_x, opts), pq); };
    if (su == 0.0) return outer(0.0);
    auto at_nodes = [&](int n) {
        const QuadratureRule& rule = cached_rule(n);
        double acc = 0.0;
        for (int j = 0; j < rule.node_count; ++j) acc += rule.weights[j] * outer(su * rule.nodes[j]);
        return acc;
    };
    double prev = at_nodes(kStartNodes);
    for (int n = 2 * kStartNodes; n <= kNodeCap; n *= 2) {
        const double cur = at_nodes(n);
        if (std::abs(cur - prev) <= opts.rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    return gaussian_average(outer, 0.0, su, gaussian_reach(degree * t.p), zeros.outer_cuts());
}

void check_s(double s, const char* who) {
    if (!(s >= 0.0 && s <= 1.0)) throw InputError(std::string(who) + ": s must lie in [0, 1]");
}

}  // namespace

double janson_quadrature(const PolySeries& g, const ExponentTriple& t, double s, const JansonOptions& opts) {
    check_s(s, "janson_quadrature");
    const int d = g.degree();
    const QuadratureRule& small = cached_rule((d + 2) / 2 + 1);
    const double rs = std::sqrt(s);
    const Complex zr = t.z * std::sqrt(1.0 - s);
    const Complex i1{0.0, 1.0};
    auto inner = [&](double u, double x) {
        Complex acc{};
        for (int a = 0; a < small.node_count; ++a) {
            const Complex base = (u + i1 * small.nodes[a]) * rs;
            for (int b = 0; b < small.node_count; ++b)
                acc += small.weights[a] * small.weights[b] * g(base + zr * (x + i1 * small.nodes[b]));
        }
        return acc;
    };
    if (opts.nodes > 0) return nested_norm(inner, t, cached_rule(std::min(opts.nodes, kMaxNodes)));
    const Complex sigma = s + (1.0 - s) * t.z * t.z;
    return janson_nested(inner, make_zero_set(heat_poly_series(-sigma, g), rs, zr), t, d, 1.0, 1.0, opts);
}

double janson_mehler(const PolySeries& g, const ExponentTriple& t, double s, const JansonOptions& opts) {
    check_s(s, "janson_mehler");
    // g~ has the monomial coefficients of g as Hermite coefficients.
    const std::vector<Complex>& a = g.coeffs;
    const double rs = std::sqrt(s);
    const Complex zr = t.z * std::sqrt(1.0 - s);
    const Complex sigma = s + (1.0 - s) * t.z * t.z;
    auto inner = [&](double u, double x) {
        if (a.empty()) return Complex{};
        const Complex X = u * rs + zr * x;
        Complex h_prev{1.0, 0.0};
        Complex h = X;
        Complex acc = a[0];
        for (std::size_t l = 1; l < a.size(); ++l) {
            acc += a[l] * h;
            const Complex next = X * h - static_cast<double>(l) * sigma * h_prev;
            h_prev = h;
            h = next;
        }
        return acc;
    };
    if (opts.nodes > 0) return nested_norm(inner, t, cached_rule(std::min(opts.nodes, kMaxNodes)));
    return janson_nested(inner, make_zero_set(heat_poly_series(-sigma, g), rs, zr), t, g.degree(), 1.0, 1.0, opts);
}

double janson_heat(const HermiteSeries& g_tilde, const ExponentTriple& t, double s, const JansonOptions& opts) {
    check_s(s, "janson_heat");
    if (s == 0.0 || s == 1.0) return janson_mehler(PolySeries{g_tilde.coeffs}, t, s, opts);
    const Complex tau = (1.0 - s) * (1.0 - t.z * t.z);
    const PolySeries smoothed = heat_poly_series(tau, to_monomial(g_tilde));
    // P_r^v F(0) = E F(sqrt(r) G): the u and x variables carry variances s and 1 - s.
    auto inner = [&](double u, double x) { return smoothed(u + t.z * x); };
    if (opts.nodes > 0) {
        const QuadratureRule& rule = cached_rule(std::min(opts.nodes, kMaxNodes));
        const double pq = t.p / t.q;
        auto over_x = [&](double u) {
            return heat_quadrature(1.0 - s, [&](double x) { return abs_pow(inner(u, x), t.q); }, 0.0, rule);
        };
        return heat_quadrature(s, [&](double u) { return std::pow(over_x(u), pq); }, 0.0, rule);
    }
    return janson_nested(inner, make_zero_set(smoothed, 1.0, t.z), t, g_tilde.degree(), std::sqrt(s),
                         std::sqrt(1.0 - s), opts);
}

double janson_value(Evaluator e, const PolySeries& g, const ExponentTriple& t, double s, const JansonOptions& opts) {
    switch (e) {
        case Evaluator::Quadrature:
            return janson_quadrature(g, t, s, opts);
        case Evaluator::Heat:
            return janson_heat(HermiteSeries{g.coeffs}, t, s, opts);
        case Evaluator::Mehler:
            break;
    }
    return janson_mehler(g, t, s, opts);
}

std::vector<double> default_s_grid(int points) {
    if (points < 2) throw InputError("default_s_grid: need at least 2 points");
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) grid[i] = static_cast<double>(i) / (points - 1);
    return grid;
}

FlowReport janson_flow(const PolySeries& g, const ExponentTriple& t, const std::vector<double>& s_grid,
                       Evaluator evaluator, bool spot_checks, const JansonOptions& opts) {
    for (double s : s_grid) check_s(s, "janson_flow");
    std::vector<FlowSample> samples(s_grid.size());
    parallel_for(s_grid.size(), [&](std::size_t i) {
        samples[i] = {s_grid[i], janson_value(evaluator, g, t, s_grid[i], opts)};
    });
    FlowReport report = make_flow_report("s", std::move(samples));
    if (spot_checks && !s_grid.empty()) {
        const Evaluator other = evaluator == Evaluator::Mehler ? Evaluator::Quadrature : Evaluator::Mehler;
        const std::size_t picks[] = {0, s_grid.size() / 2, s_grid.size() - 1};
        for (std::size_t i : picks) {
            const double a = report.samples[i].value;
            const double b = janson_value(other, g, t, s_grid[i], opts);
            if (rel_diff(a, b) > 1e-6 && std::abs(a - b) > 1e-14)
                throw EvaluatorMismatch("janson_flow: evaluators disagree at s = " + std::to_string(s_grid[i]));
        }
    }
    return report;
}

namespace {

// m_r = E (c + i S)^r / n^{r/2} for r = 0..l, S the sum of `len` random signs.
std::vector<Complex> block_moments(double c, int len, int n, int l) {
    std::vector<Complex> m(l + 1, Complex{});
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    double wsum = 0.0;
    for (int j = 0; j <= len; ++j) {
        const double w = std::exp(log_binomial(len, j) - len * std::log(2.0));
        wsum += w;
        const Complex base = Complex(c, 2.0 * j - len) * scale;
        Complex pw{1.0, 0.0};
        for (int r = 0; r <= l; ++r) {
            m[r] += w * pw;
            pw *= base;
        }
    }
    for (auto& v : m) v /= wsum;
    return m;
}

}  // namespace

MomentCheck mixed_moment_check(const BlockCounts& counts, int n, Complex z, int l) {
    if (l < 0 || l > 12) throw InputError("mixed_moment_check: need 0 <= L <= 12");
    counts.validate(n);
    const int k = counts.k;
    const auto m1 = block_moments(2.0 * counts.a - k, k, n, l);
    const auto m2 = block_moments(2.0 * counts.b - (n - k), n - k, n, l);
    Complex lhs{};
    Complex zm{1.0, 0.0};
    for (int m = 0; m <= l; ++m) {
        lhs += binomial(l, m) * m1[l - m] * m2[m] * zm;
        zm *= z;
    }
    MomentCheck out;
    out.lhs = lhs;
    out.rhs = phi_block_eval(l, n, counts, z);
    out.abs_diff = std::abs(out.lhs - out.rhs);
    return out;
}

MomentCheck mixed_moment_check(std::span<const int> x, int k, Complex z, int l) {
    const int n = static_cast<int>(x.size());
    if (k < 0 || k > n) throw InputError("mixed_moment_check: k must lie in [0, n]");
    BlockCounts c;
    c.k = k;
    for (int j = 0; j < n; ++j) {
        if (x[j] != 1 && x[j] != -1) throw InputError("mixed_moment_check: entries must be +-1");
        if (x[j] == 1) (j < k ? c.a : c.b)++;
    }
    return mixed_moment_check(c, n, z, l);
}

std::optional<double> fit_loglog_slope(const std::vector<ConvergenceRow>& rows, double floor) {
    std::vector<double> xs, ys;
    for (const auto& r : rows)
        if (r.abs_error > floor) {
            xs.push_back(std::log(static_cast<double>(r.n)));
            ys.push_back(std::log(r.abs_error));
        }
    if (xs.size() < 2) return std::nullopt;
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

ConvergenceTable convergence_experiment(const std::vector<Complex>& a, const ExponentTriple& t, double s,
                                        const std::vector<int>& n_list, const JansonOptions& opts) {
    check_s(s, "convergence_experiment");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw InputError("convergence_experiment: n must be positive");
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw InputError("convergence_experiment: n_list must be strictly increasing");
    }
    const double continuous = janson_mehler(PolySeries{a}, t, s, opts);
    ConvergenceTable table;
    table.rows.resize(n_list.size());
    parallel_for(n_list.size(), [&](std::size_t i) {
        const int n = n_list[i];
        SymmetricSpec f{n, a};
        ConvergenceRow& row = table.rows[i];
        row.n = n;
        row.k = static_cast<int>(std::lround(s * n));
        row.discrete_value = mixed_norm_collapsed(f, t.z, row.k, t.p, t.q);
        row.continuous_value = continuous;
        row.abs_error = std::abs(row.discrete_value - continuous);
    });
    table.slope = fit_loglog_slope(table.rows);
    return table;
}

}  // namespace hypflow
