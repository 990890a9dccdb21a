#include "hypflow/gauss_hermite.hpp"

#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Eigenvalues>

namespace hypflow {

namespace {

// Orthonormal Hermite values hn_k = He_k / sqrt(k!) at x, returned as
// (hn_n, hn_{n-1}) times exp(-log_scale). Rescaling keeps the recurrence finite
// out to the largest nodes of a 512-point rule.
struct NormalizedPair {
    double top;
    double below;
    double log_scale;
};

NormalizedPair normalized_hermite(int n, double x) {
    double prev = 0.0;
    double cur = 1.0;
    double log_scale = 0.0;
    for (int k = 0; k < n; ++k) {
        const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(k + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > 1e150) {
            cur *= 1e-150;
            prev *= 1e-150;
            log_scale += 150.0 * std::log(10.0);
        }
    }
    return {cur, prev, log_scale};
}

// Gaussian moment coefficient binom(m, 2j) (2j-1)!!, i.e. m! / (2^j j! (m-2j)!).
double pairing_count(int m, int j) {
    return binomial(m, 2 * j) * gaussian_moment(2 * j);
}

}  // namespace

QuadratureRule gh_rule(int n) {
    if (n < 1) throw InputError("gh_rule: node count must be positive");
    if (n > kMaxNodes) throw InputError("gh_rule: node count exceeds cap");

    QuadratureRule rule;
    rule.node_count = n;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    if (n == 1) {
        rule.weights[0] = 1.0;
        return rule;
    }

    // Monic recurrence p_{k+1} = x p_k - k p_{k-1}: zero diagonal, sqrt(k) off it.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw AccuracyError("gh_rule: eigenvalue solve failed");
    const Eigen::VectorXd& eig = solver.eigenvalues();

    std::vector<double> x(eig.data(), eig.data() + n);
    std::sort(x.begin(), x.end());
    for (double& xi : x) {
        for (int it = 0; it < 8; ++it) {
            const auto v = normalized_hermite(n, xi);
            const double step = v.top / (std::sqrt(static_cast<double>(n)) * v.below);
            xi -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(xi))) break;
        }
    }
    for (int i = 0; i < n / 2; ++i) {
        const double m = 0.5 * (x[n - 1 - i] - x[i]);
        x[i] = -m;
        x[n - 1 - i] = m;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;

    // w_i = 1 / (n hn_{n-1}(x_i)^2), evaluated in log space.
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
        const auto v = normalized_hermite(n, x[i]);
        const double logw = -2.0 * (std::log(std::abs(v.below)) + v.log_scale) - std::log(static_cast<double>(n));
        w[i] = std::exp(logw);
    }
    for (int i = 0; i < n / 2; ++i) {
        const double m = 0.5 * (w[i] + w[n - 1 - i]);
        w[i] = w[n - 1 - i] = m;
    }
    double total = 0.0;
    // Sum smallest first.
    for (int i = 0; i < n / 2; ++i) total += w[i] + w[n - 1 - i];
    if (n % 2 == 1) total += w[n / 2];
    for (double& wi : w) wi /= total;

    rule.nodes = std::move(x);
    rule.weights = std::move(w);
    return rule;
}

const QuadratureRule& cached_rule(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<QuadratureRule>(gh_rule(n))).first;
    return *it->second;
}

Complex PolySeries::operator()(Complex x) const {
    Complex acc{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Complex HermiteSeries::operator()(Complex x) const {
    if (coeffs.empty()) return {};
    Complex prev{};
    Complex cur{1.0, 0.0};
    Complex acc = coeffs[0];
    for (std::size_t l = 1; l < coeffs.size(); ++l) {
        const Complex next = x * cur - static_cast<double>(l - 1) * prev;
        prev = cur;
        cur = next;
        acc += coeffs[l] * cur;
    }
    return acc;
}

Complex hermite_eval(int l, Complex x) {
    if (l < 0) throw InputError("hermite_eval: negative degree");
    Complex prev{};
    Complex cur{1.0, 0.0};
    for (int k = 0; k < l; ++k) {
        const Complex next = x * cur - static_cast<double>(k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

HermiteSeries to_hermite(const PolySeries& p) {
    HermiteSeries h;
    h.coeffs.assign(p.coeffs.size(), Complex{});
    for (int m = 0; m < static_cast<int>(p.coeffs.size()); ++m)
        for (int j = 0; 2 * j <= m; ++j) h.coeffs[m - 2 * j] += pairing_count(m, j) * p.coeffs[m];
    return h;
}

PolySeries to_monomial(const HermiteSeries& h) {
    PolySeries p;
    p.coeffs.assign(h.coeffs.size(), Complex{});
    for (int m = 0; m < static_cast<int>(h.coeffs.size()); ++m)
        for (int j = 0; 2 * j <= m; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            p.coeffs[m - 2 * j] += sign * pairing_count(m, j) * h.coeffs[m];
        }
    return p;
}

HermiteSeries gaussian_smooth(const PolySeries& g) {
    return HermiteSeries{g.coeffs};
}

HermiteSeries mehler_apply_series(Complex w, const HermiteSeries& g) {
    if (std::abs(w) > 1.0 + 1e-12) throw DomainError("mehler_apply_series: |w| > 1");
    HermiteSeries out = g;
    Complex wl{1.0, 0.0};
    for (auto& c : out.coeffs) {
        c *= wl;
        wl *= w;
    }
    return out;
}

std::pair<Complex, Complex> mehler_kernel_check(Complex w, const HermiteSeries& g, Complex x,
                                                const QuadratureRule& rule) {
    const Complex v = 1.0 - w * w;
    if (std::abs(v) < 1e-14) throw DomainError("mehler_kernel_check: w^2 = 1, kernel is singular");
    const Complex series = mehler_apply_series(w, g)(x);
    // exp(-(xw - y)^2 / 2v) = exp(-y^2/2v + xw y / v - x^2 w^2 / 2v)
    const Complex a = 1.0 / (2.0 * v);
    const Complex b = x * w / v;
    const Complex pre = std::exp(-x * x * w * w / (2.0 * v)) / std::sqrt(2.0 * kPi * v);
    const Complex kernel = pre * gaussian_exp_quadrature([&](double y) { return g(Complex(y, 0.0)); }, a, b, rule);
    return {series, kernel};
}

Complex GaussianAtom::gamma_integral() const {
    const Complex a = quad + 0.5;
    if (!(a.real() > 1e-12)) throw DomainError("GaussianAtom: integral against dgamma diverges");
    return amplitude * gaussian_exp_closed(a, lin) / std::sqrt(2.0 * kPi);
}

Complex gaussian_exp_closed(Complex a, Complex b) {
    if (!(a.real() > 1e-12)) throw DomainError("gaussian_exp_closed: Re A must be positive");
    return std::sqrt(kPi / a) * std::exp(b * b / (4.0 * a));
}

Complex mehler_apply_atom(Complex w, const GaussianAtom& atom, Complex x) {
    const Complex v = 1.0 - w * w;
    if (std::abs(v) < 1e-14) {
        // M_{+-1} h(x) = h(+-x) on the series side.
        return atom(w.real() > 0.0 ? x : -x);
    }
    const Complex a = atom.quad + 1.0 / (2.0 * v);
    if (!(a.real() > 1e-12)) throw DomainError("mehler_apply_atom: Gaussian integral diverges");
    const Complex b = atom.lin + x * w / v;
    return atom.amplitude * gaussian_exp_closed(a, b) * std::exp(-x * x * w * w / (2.0 * v)) /
           std::sqrt(2.0 * kPi * v);
}

GaussianAtom heat_atom(Complex tau, const GaussianAtom& atom) {
    if (tau == Complex{}) return atom;
    const Complex d = 1.0 + 2.0 * atom.quad * tau;
    if (!(d.real() > 1e-12) || !((atom.quad + 1.0 / (2.0 * tau)).real() > 1e-12))
        throw DomainError("heat_atom: Gaussian integral diverges");
    GaussianAtom out;
    out.amplitude = atom.amplitude / std::sqrt(d) * std::exp(atom.lin * atom.lin * tau / (2.0 * d));
    out.quad = atom.quad / d;
    out.lin = atom.lin / d;
    return out;
}

PolySeries heat_poly_series(Complex s, const PolySeries& h) {
    const int n = static_cast<int>(h.coeffs.size());
    PolySeries out;
    out.coeffs.assign(n, Complex{});
    for (int k = 0; k < n; ++k) {
        Complex sj{1.0, 0.0};
        for (int j = 0; k + 2 * j < n; ++j) {
            out.coeffs[k] += h.coeffs[k + 2 * j] * (binomial(k + 2 * j, 2 * j) * gaussian_moment(2 * j)) * sj;
            sj *= s;
        }
    }
    return out;
}

Complex heat_poly(Complex s, const PolySeries& h, Complex x) {
    return heat_poly_series(s, h)(x);
}

PolySeries compose_affine(const PolySeries& p, Complex c0, Complex c1) {
    // Horner in polynomial arithmetic: acc <- acc * (c0 + c1 x) + p_m.
    PolySeries acc;
    acc.coeffs.assign(std::max<std::size_t>(1, p.coeffs.size()), Complex{});
    std::vector<Complex> tmp(acc.coeffs.size());
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
        std::fill(tmp.begin(), tmp.end(), Complex{});
        for (std::size_t k = 0; k < acc.coeffs.size(); ++k) {
            tmp[k] += acc.coeffs[k] * c0;
            if (k + 1 < tmp.size()) tmp[k + 1] += acc.coeffs[k] * c1;
        }
        tmp[0] += *it;
        acc.coeffs.swap(tmp);
    }
    return acc;
}

std::pair<Complex, Complex> gaussian_rotation_check(const PolySeries& p, Complex z1, Complex z2,
                                                    const QuadratureRule& rule) {
    Complex lhs{};
    for (int i = 0; i < rule.node_count; ++i)
        for (int j = 0; j < rule.node_count; ++j)
            lhs += rule.weights[i] * rule.weights[j] * p(z1 * rule.nodes[i] + z2 * rule.nodes[j]);
    // E (x sqrt(sigma))^m = sigma^{m/2} (m-1)!! for even m; odd moments vanish.
    const Complex sigma = z1 * z1 + z2 * z2;
    Complex rhs{};
    Complex sj{1.0, 0.0};
    for (int m = 0; m < static_cast<int>(p.coeffs.size()); m += 2) {
        rhs += p.coeffs[m] * gaussian_moment(m) * sj;
        sj *= sigma;
    }
    return {lhs, rhs};
}

std::pair<Complex, Complex> mehler_fourier_check(Complex w, const HermiteSeries& h, double x,
                                                 const QuadratureRule& rule) {
    const Complex v = 1.0 - w * w;
    if (std::abs(v) < 1e-14) throw DomainError("mehler_fourier_check: w^2 = 1");
    const Complex series = mehler_apply_series(w, h)(Complex(x, 0.0));
    const Complex xi = -x * w / (Complex(0.0, 2.0 * kPi) * v);
    const Complex transform =
        fourier_damped([&](double y) { return h(Complex(y, 0.0)); }, 1.0 / (2.0 * v), xi, rule);
    const Complex fourier = std::exp(-x * x * w * w / (2.0 * v)) / std::sqrt(2.0 * kPi * v) * transform;
    return {series, fourier};
}

Complex gaussian_poly_integral(const PolySeries& p, Complex a, Complex b) {
    if (!(a.real() > 1e-12)) throw DomainError("gaussian_poly_integral: Re A must be positive");
    const Complex center = b / (2.0 * a);
    // E P(center + G / sqrt(2A)) = heat_poly(1 / 2A, P, center).
    return gaussian_exp_closed(a, b) * heat_poly(1.0 / (2.0 * a), p, center);
}

}  // namespace hypflow
