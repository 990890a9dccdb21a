#include "hypflow/hausdorff_young.hpp"

#include <algorithm>
#include <cmath>

#include "hypflow/line_quadrature.hpp"

namespace hypflow {

namespace {

const Complex kI{0.0, 1.0};

bool is_zero_poly(const PolySeries& p) {
    return std::all_of(p.coeffs.begin(), p.coeffs.end(), [](Complex c) { return c == Complex{}; });
}

bool is_zero(const PolyGaussian& f) { return f.atom.amplitude == Complex{} || is_zero_poly(f.poly); }

// Window holding |v|^r for log|v| ~ -a x^2 + b x up to a polynomial factor of degree d.
std::pair<double, double> gaussian_window(double a, double b, double r, int d) {
    if (!(a > 1e-12)) throw DomainError("gaussian_window: integrand does not decay");
    const double centre = b / (2.0 * a);
    const double width = 1.0 / std::sqrt(2.0 * r * a);
    const double half = (20.0 + 2.0 * std::sqrt(r * d)) * width;
    return {centre - half, centre + half};
}

// Integrates w_i exp(log_f(centre + y_i / sqrt(kappa)) - x^2/2 + y_i^2/2) / sqrt(kappa):
// the dgamma integral of exp(log_f) against a rule matched to exp(-kappa (x - centre)^2 / 2).
template <class L>
double matched_gamma_integral(L&& log_f, double centre, double kappa, const QuadratureRule& rule) {
    const double root = std::sqrt(kappa);
    double acc = 0.0;
    for (int i = 0; i < rule.node_count; ++i) {
        if (rule.weights[i] <= 0.0) continue;
        const double y = rule.nodes[i];
        const double x = centre + y / root;
        const double e = log_f(x) - 0.5 * x * x + 0.5 * y * y;
        acc += rule.weights[i] * std::exp(e);
    }
    return acc / root;
}

}  // namespace

Complex exp_a(Complex zeta, Complex x) { return std::exp(zeta * x - 0.5 * zeta * zeta); }

Complex ExpFamily::operator()(Complex w) const {
    Complex acc{};
    for (const auto& a : atoms) acc += a.c * std::exp(a.t * w);
    return acc;
}

Complex ExpFamily::phi_s(double s, Complex z, double x, double u) const {
    Complex acc{};
    for (const auto& a : atoms) acc += a.c * exp_a(a.t * std::sqrt(s), x) * exp_a(a.t * z * std::sqrt(1.0 - s), u);
    return acc;
}

Complex ExpFamily::h(double p, double x) const {
    const double root = std::sqrt(2.0 * kPi * p);
    Complex acc{};
    for (const auto& a : atoms) acc += a.c * std::exp(a.t * root * x - 0.5 * a.t * a.t);
    return acc * std::exp(-kPi * x * x);
}

Complex ExpFamily::h_hat(double p, double u) const {
    const double q = p / (p - 1.0);
    const double root = std::sqrt(2.0 * kPi * p);
    const double ratio = std::sqrt(p / q);
    Complex acc{};
    for (const auto& a : atoms) {
        const Complex w = kI * a.t * ratio;
        acc += a.c * std::exp(-kI * root * a.t * u - 0.5 * w * w);
    }
    return acc * std::exp(-kPi * u * u);
}

HYInput::HYInput(HermiteSeries g_tilde, double p) : rep_(std::move(g_tilde)), p_(p), q_(0.0) {
    if (!(p > 1.0 && p <= 2.0)) throw InputError("HYInput: need 1 < p <= 2");
    q_ = p / (p - 1.0);
    ExponentTriple(p_, q_, z());
}

HYInput::HYInput(PolyGaussian f, double p) : rep_(std::move(f)), p_(p), q_(0.0) {
    if (!(p > 1.0 && p <= 2.0)) throw InputError("HYInput: need 1 < p <= 2");
    q_ = p / (p - 1.0);
    ExponentTriple(p_, q_, z());
}

Complex HYInput::z() const { return Complex(0.0, std::sqrt(p_ - 1.0)); }

PolyGaussian HYInput::f() const {
    if (const auto* h = std::get_if<HermiteSeries>(&rep_)) {
        GaussianAtom atom{std::pow(2.0 * kPi, -1.0 / (2.0 * p_)), 1.0 / (2.0 * p_), 0.0};
        return {to_monomial(*h), atom};
    }
    return std::get<PolyGaussian>(rep_);
}

PolyGaussian HYInput::g_tilde() const {
    if (const auto* h = std::get_if<HermiteSeries>(&rep_)) return {to_monomial(*h), GaussianAtom{}};
    PolyGaussian g = std::get<PolyGaussian>(rep_);
    g.atom.amplitude *= std::pow(2.0 * kPi, 1.0 / (2.0 * p_));
    g.atom.quad -= 1.0 / (2.0 * p_);
    return g;
}

double substitution_error(const HYInput& in, const std::vector<double>& ys) {
    const PolyGaussian f = in.f();
    const double p = in.p();
    double worst = 0.0;
    for (double y : ys) {
        const Complex g = in.hermite() ? (*in.hermite())(y) : in.g_tilde()(y);
        const Complex back = g * std::exp(-y * y / (2.0 * p)) * std::pow(2.0 * kPi, -1.0 / (2.0 * p));
        worst = std::max(worst, rel_diff(back, f(y), 1e-300));
    }
    return worst;
}

double hy_constant(double p) {
    const double q = p / (p - 1.0);
    return std::sqrt(std::pow(p, 1.0 / p) / std::pow(q, 1.0 / q));
}

double line_power_integral(const std::function<Complex(double)>& v, double r, double lo, double hi) {
    return integrate_nonneg([&](double x) { return abs_pow(v(x), r); }, lo, hi);
}

std::pair<double, double> hy_endpoints(const HYInput& in) {
    const PolyGaussian f = in.f();
    if (is_zero(f)) return {0.0, 0.0};
    const double p = in.p();
    const double q = in.q();
    const Complex alpha = f.atom.quad;
    const Complex beta = f.atom.lin;
    const int d = f.poly.degree();

    const auto [flo, fhi] = gaussian_window(alpha.real(), beta.real(), p, d);
    const double norm_f = std::pow(line_power_integral([&](double y) { return f(y); }, p, flo, fhi), 1.0 / p);

    auto fhat = [&](double xi) {
        return f.atom.amplitude * gaussian_poly_integral(f.poly, alpha, beta - Complex(0.0, 2.0 * kPi * xi));
    };
    const auto [glo, ghi] = gaussian_window(kPi * kPi * (1.0 / alpha).real(), kPi * (beta / alpha).imag(), q, d);
    const double norm_fhat = std::pow(line_power_integral(fhat, q, glo, ghi), 1.0 / q);
    return {norm_fhat, hy_constant(p) * norm_f};
}

double janson_atom(const PolyGaussian& g_tilde, const ExponentTriple& t, double s, const JansonOptions& opts) {
    if (!(s >= 0.0 && s <= 1.0)) throw InputError("janson_atom: s must lie in [0, 1]");
    if (is_zero(g_tilde)) return 0.0;
    const double pq = t.p / t.q;
    const Complex tau = (1.0 - s) * (1.0 - t.z * t.z);

    // P_tau (P * atom)(X) = atom'(X) * R(X) with R(X) = P_v P(mu(X)).
    const GaussianAtom& atom = g_tilde.atom;
    const Complex denom = 1.0 + 2.0 * atom.quad * tau;
    const GaussianAtom moved = tau == Complex{} ? atom : heat_atom(tau, atom);
    const PolySeries r_poly = tau == Complex{}
                                  ? g_tilde.poly
                                  : compose_affine(heat_poly_series(tau / denom, g_tilde.poly), atom.lin * tau / denom,
                                                   1.0 / denom);

    const double a = std::sqrt(s);
    const Complex b = t.z * std::sqrt(1.0 - s);
    auto log_g = [&](double u, double x) {
        const Complex X = a * u + b * x;
        return moved.log_value(X).real() + std::log(std::abs(r_poly(X)));
    };

    const double kappa_x = 1.0 + 2.0 * t.q * (moved.quad * b * b).real();
    if (!(kappa_x > 1e-12)) throw DomainError("janson_atom: inner integral diverges");
    auto centre_x = [&](double u) { return t.q * (b * (moved.lin - 2.0 * moved.quad * a * u)).real() / kappa_x; };
    auto inner_fixed = [&](double u, const QuadratureRule& rule) {
        return matched_gamma_integral([&](double x) { return t.q * log_g(u, x); }, centre_x(u), kappa_x, rule);
    };
    const int d = g_tilde.poly.degree();
    const double reach_x = gaussian_reach(d * t.q) / std::sqrt(kappa_x);
    auto log_inner = [&](double u) {
        double v;
        try {
            v = refine_nodes([&](int n) { return inner_fixed(u, cached_rule(n)); }, 32, opts.rel_tol, opts.rel_tol,
                             "janson_atom");
        } catch (const AccuracyError&) {
            const double c = centre_x(u);
            v = integrate_nonneg([&](double x) { return std::exp(t.q * log_g(u, x) - 0.5 * x * x); }, c - reach_x,
                                 c + reach_x) /
                std::sqrt(2.0 * kPi);
        }
        return std::log(v);
    };

    // Outer envelope from the atom alone, whose log inner(u)^{p/q} is exactly
    // quadratic: fit through u = -1, 0, 1.
    auto log_atom_inner = [&](double u) {
        const double v = matched_gamma_integral(
            [&](double x) { return t.q * moved.log_value(a * u + b * x).real(); }, centre_x(u), kappa_x,
            cached_rule(16));
        return pq * std::log(v);
    };
    const double lm = log_atom_inner(-1.0);
    const double l0 = log_atom_inner(0.0);
    const double lp = log_atom_inner(1.0);
    const double a2 = 0.5 * (lp + lm - 2.0 * l0);
    const double a1 = 0.5 * (lp - lm);
    const double kappa_u = 1.0 - 2.0 * a2;
    if (!(kappa_u > 1e-12) || !std::isfinite(kappa_u)) throw DomainError("janson_atom: outer integral diverges");
    const double centre_u = a1 / kappa_u;

    if (opts.nodes > 0) {
        const QuadratureRule& rule = cached_rule(std::min(opts.nodes, kMaxNodes));
        return matched_gamma_integral([&](double u) { return pq * std::log(inner_fixed(u, rule)); }, centre_u,
                                      kappa_u, rule);
    }
    // (.)^{p/q} has a kink wherever the inner average vanishes.
    const double reach_u = gaussian_reach(d * t.p) / std::sqrt(kappa_u);
    return integrate_nonneg([&](double u) { return std::exp(pq * log_inner(u) - 0.5 * u * u); }, centre_u - reach_u,
                            centre_u + reach_u) /
           std::sqrt(2.0 * kPi);
}

double phi_value(const HYInput& in, double s, const JansonOptions& opts) {
    const ExponentTriple t(in.p(), in.q(), in.z());
    const double j = in.hermite() ? janson_mehler(PolySeries{in.hermite()->coeffs}, t, s, opts)
                                  : janson_atom(in.g_tilde(), t, s, opts);
    const double p = in.p();
    const double q = in.q();
    return std::pow(j * std::sqrt(p) / std::pow(q, p / (2.0 * q)), 1.0 / p);
}

FlowReport phi_flow(const HYInput& in, const std::vector<double>& s_grid, const JansonOptions& opts) {
    std::vector<FlowSample> samples(s_grid.size());
    parallel_for(s_grid.size(), [&](std::size_t i) { samples[i] = {s_grid[i], phi_value(in, s_grid[i], opts)}; });
    return make_flow_report("s", std::move(samples));
}

std::pair<Complex, Complex> lemma_a_check(Complex zeta, Complex x, const QuadratureRule& rule) {
    const Complex quad =
        std::exp(zeta * x) * gaussian_exp_quadrature([](double) { return 1.0; }, 0.5, kI * zeta, rule) /
        std::sqrt(2.0 * kPi);
    return {quad, exp_a(zeta, x)};
}

std::pair<Complex, Complex> lemma_f_check(Complex t, double p, double u, const QuadratureRule& rule) {
    const double q = p / (p - 1.0);
    const Complex b = t * std::sqrt(2.0 * kPi * p);
    const Complex quad = std::exp(-0.5 * t * t) *
                         gaussian_exp_quadrature([](double) { return 1.0; }, kPi, b - Complex(0.0, 2.0 * kPi * u), rule);
    const Complex w = kI * t * std::sqrt(p / q);
    const Complex closed = std::exp(-kI * std::sqrt(2.0 * kPi * p) * t * u - 0.5 * w * w) * std::exp(-kPi * u * u);
    return {quad, closed};
}

namespace {

double exp_norm_h(const ExpFamily& fam, double p) {
    const double root = std::sqrt(2.0 * kPi * p);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& a : fam.atoms) {
        const auto [l, h] = gaussian_window(kPi, (a.t * root).real(), p, 0);
        lo = std::min(lo, l);
        hi = std::max(hi, h);
    }
    return line_power_integral([&](double x) { return fam.h(p, x); }, p, lo, hi);
}

double exp_norm_h_hat(const ExpFamily& fam, double p) {
    const double q = p / (p - 1.0);
    const double root = std::sqrt(2.0 * kPi * p);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& a : fam.atoms) {
        const auto [l, h] = gaussian_window(kPi, (a.t * root).imag(), q, 0);
        lo = std::min(lo, l);
        hi = std::max(hi, h);
    }
    return line_power_integral([&](double u) { return fam.h_hat(p, u); }, q, lo, hi);
}

}  // namespace

double exp_phi_value(const ExpFamily& fam, double p, double s) {
    if (!(p > 1.0 && p <= 2.0)) throw InputError("exp_phi_value: need 1 < p <= 2");
    if (!(s >= 0.0 && s <= 1.0)) throw InputError("exp_phi_value: s must lie in [0, 1]");
    const double q = p / (p - 1.0);
    const Complex z(0.0, std::sqrt(p / q));
    ExponentTriple(p, q, z);
    if (fam.atoms.empty()) return 0.0;

    const std::size_t m = fam.atoms.size();
    std::vector<Complex> zeta(m), eta(m);
    for (std::size_t l = 0; l < m; ++l) {
        zeta[l] = fam.atoms[l].t * std::sqrt(s);
        eta[l] = fam.atoms[l].t * z * std::sqrt(1.0 - s);
    }

    auto inner = [&](double x) {
        std::vector<Complex> coef(m);
        double best = -INFINITY;
        double centre = 0.0;
        for (std::size_t l = 0; l < m; ++l) {
            coef[l] = fam.atoms[l].c * exp_a(zeta[l], x) * std::exp(-0.5 * eta[l] * eta[l]);
            const double peak = q * eta[l].real();
            const double env = q * std::log(std::abs(coef[l])) + 0.5 * peak * peak;
            if (env > best) {
                best = env;
                centre = peak;
            }
        }
        // dgamma(u) = dgamma(y) exp(-centre y - centre^2/2) with u = y + centre.
        auto at_nodes = [&](int n) {
            const QuadratureRule& rule = cached_rule(n);
            double acc = 0.0;
            for (int i = 0; i < rule.node_count; ++i) {
                const double u = rule.nodes[i] + centre;
                Complex val{};
                for (std::size_t l = 0; l < m; ++l) val += coef[l] * std::exp(eta[l] * u);
                acc += rule.weights[i] * abs_pow(val, q) * std::exp(-centre * rule.nodes[i] - 0.5 * centre * centre);
            }
            return acc;
        };
        return refine_nodes(at_nodes, 64, 1e-12, 1e-8, "exp_phi_value");
    };

    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t l = 0; l < m; ++l) {
        const double peak = p * zeta[l].real();
        lo = std::min(lo, peak - 24.0);
        hi = std::max(hi, peak + 24.0);
    }
    const double norm = 1.0 / std::sqrt(2.0 * kPi);
    return line_power_integral(
        [&](double x) { return Complex(std::pow(inner(x), p / q) * std::exp(-0.5 * x * x) * norm, 0.0); }, 1.0, lo,
        hi);
}

ExpFlowResult exp_flow_phi(const ExpFamily& fam, double p, const std::vector<double>& s_grid) {
    std::vector<FlowSample> samples(s_grid.size());
    parallel_for(s_grid.size(), [&](std::size_t i) { samples[i] = {s_grid[i], exp_phi_value(fam, p, s_grid[i])}; });
    ExpFlowResult out;
    out.report = make_flow_report("s", std::move(samples));
    auto lookup = [&](double s) {
        for (const auto& smp : out.report.samples)
            if (smp.parameter == s) return smp.value;
        return exp_phi_value(fam, p, s);
    };
    out.phi0 = lookup(0.0);
    out.phi1 = lookup(1.0);
    const double q = p / (p - 1.0);
    if (!fam.atoms.empty()) {
        out.phi0_closed = std::pow(q, p / (2.0 * q)) * std::pow(exp_norm_h_hat(fam, p), p / q);
        out.phi1_closed = std::sqrt(p) * exp_norm_h(fam, p);
    }
    out.endpoints_ordered = out.phi0 <= out.phi1 * (1.0 + 1e-10);
    return out;
}

HYVerify hy_verify(const ExpFamily& fam, double p) {
    if (!(p > 1.0 && p <= 2.0)) throw InputError("hy_verify: need 1 < p <= 2");
    for (const auto& a : fam.atoms)
        if (a.t.imag() != 0.0) throw InputError("hy_verify: exponents t must be real");
    HYVerify out;
    if (fam.atoms.empty()) return out;
    const double q = p / (p - 1.0);
    out.lhs = std::pow(exp_norm_h_hat(fam, p), 1.0 / q);
    out.rhs = hy_constant(p) * std::pow(exp_norm_h(fam, p), 1.0 / p);
    out.holds = out.lhs <= out.rhs + 1e-8;
    return out;
}

}  // namespace hypflow
