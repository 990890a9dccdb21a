#pragma once

// Hermite polynomials (probabilists' normalization), Gauss-Hermite rules for
// the standard Gaussian measure, and the Mehler / heat semigroups acting on
// polynomials and on Gaussian atoms.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hypflow/common.hpp"

namespace hypflow {

/// Nodes and weights for dgamma(x) = exp(-x^2/2) dx / sqrt(2 pi).
/// Exact on polynomials of degree <= 2 * node_count - 1; weights sum to 1.
struct QuadratureRule {
    int node_count = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    template <class F>
    auto integrate(F&& f) const {
        using R = decltype(f(0.0));
        R sum{};
        for (int i = 0; i < node_count; ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

inline constexpr int kMaxNodes = 512;

/// Golub-Welsch eigenvalues of the Hermite Jacobi matrix, Newton-polished.
/// Throws InputError for n < 1.
QuadratureRule gh_rule(int n);

/// Process-wide read-only cache of gh_rule(n); the reference stays valid.
const QuadratureRule& cached_rule(int n);

/// Result of an auto-doubling quadrature (n, 2n, ... capped at kMaxNodes).
template <class T>
struct AdaptiveValue {
    T value{};
    int nodes = 0;
    bool converged = false;
};

/// Integrates f against dgamma, doubling the node count from n_start until two
/// successive values agree to rel_tol (relative), or the cap is reached.
template <class F>
auto integrate_adaptive(F&& f, int n_start = 16, double rel_tol = 1e-10) {
    using R = decltype(f(0.0));
    AdaptiveValue<R> out;
    int n = std::max(1, std::min(n_start, kMaxNodes));
    R prev = cached_rule(n).integrate(f);
    while (n < kMaxNodes) {
        const int next = std::min(2 * n, kMaxNodes);
        const auto& rule = cached_rule(next);
        R cur{};
        double mag = 0.0;
        for (int i = 0; i < rule.node_count; ++i) {
            const R v = f(rule.nodes[i]);
            cur += rule.weights[i] * v;
            mag += rule.weights[i] * std::abs(v);
        }
        const double diff = std::abs(cur - prev);
        n = next;
        prev = cur;
        if (diff <= rel_tol * std::abs(cur) || diff <= 1e-15 * mag) {
            out.converged = true;
            break;
        }
    }
    out.value = prev;
    out.nodes = n;
    return out;
}

/// Evaluates at_nodes(n) for n = start, 2 start, ... up to kMaxNodes until two
/// successive values agree to rel_tol (relative). At the cap, a remaining
/// disagreement above cap_tol raises AccuracyError.
template <class F>
double refine_nodes(F&& at_nodes, int start, double rel_tol, double cap_tol, const char* who) {
    int n = std::max(1, std::min(start, kMaxNodes));
    double prev = at_nodes(n);
    double diff = 0.0;
    while (n < kMaxNodes) {
        n = std::min(2 * n, kMaxNodes);
        const double cur = at_nodes(n);
        diff = std::abs(cur - prev);
        prev = cur;
        if (diff <= rel_tol * std::abs(cur)) return cur;
    }
    if (diff <= cap_tol * std::abs(prev)) return prev;
    throw AccuracyError(std::string(who) + ": no convergence at the node cap");
}

/// Polynomial in the monomial basis: sum coeffs[l] x^l.
struct PolySeries {
    std::vector<Complex> coeffs;

    int degree() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1; }
    Complex operator()(Complex x) const;
};

/// Series in the probabilists' Hermite basis: sum coeffs[l] H_l(x).
struct HermiteSeries {
    std::vector<Complex> coeffs;

    int degree() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1; }
    Complex operator()(Complex x) const;
};

/// H_l(x) = integral (x + iy)^l dgamma(y), via H_{l+1} = x H_l - l H_{l-1}.
Complex hermite_eval(int l, Complex x);

// basis_convert, both directions. Exact linear change of basis.
HermiteSeries to_hermite(const PolySeries& p);
PolySeries to_monomial(const HermiteSeries& h);

/// g~(x) = integral g(x + iy) dgamma(y): the monomial coefficients of g become
/// Hermite coefficients of g~.
HermiteSeries gaussian_smooth(const PolySeries& g);

/// Mehler semigroup on coefficients: a_l -> w^l a_l. Requires |w| <= 1 + 1e-12.
HermiteSeries mehler_apply_series(Complex w, const HermiteSeries& g);

/// (series value of M_w g(x), kernel integral via quadrature). Rejects w^2 = 1.
std::pair<Complex, Complex> mehler_kernel_check(Complex w, const HermiteSeries& g, Complex x,
                                                const QuadratureRule& rule);

/// y -> amplitude * exp(-quad y^2 + lin y).
struct GaussianAtom {
    Complex amplitude{1.0, 0.0};
    Complex quad{0.0, 0.0};
    Complex lin{0.0, 0.0};

    Complex operator()(Complex y) const { return amplitude * std::exp(-quad * y * y + lin * y); }
    Complex log_value(Complex y) const { return std::log(amplitude) - quad * y * y + lin * y; }

    /// Closed-form integral against dgamma. Requires Re(quad + 1/2) > 1e-12.
    Complex gamma_integral() const;
};

/// M_w applied to an atom and evaluated at x, by completing the square in the
/// kernel integral. w = +-1 act as identity / reflection. Throws DomainError if
/// Re(quad + 1/(2(1-w^2))) <= 1e-12.
Complex mehler_apply_atom(Complex w, const GaussianAtom& atom, Complex x);

/// Heat semigroup P_tau applied to an atom; the image is again an atom.
/// Principal branch of sqrt(1 + 2 quad tau). Throws DomainError when the
/// defining Gaussian integral diverges.
GaussianAtom heat_atom(Complex tau, const GaussianAtom& atom);

/// P_s h as a polynomial identity: E h(x + sqrt(s) G), entire in s.
PolySeries heat_poly_series(Complex s, const PolySeries& h);
Complex heat_poly(Complex s, const PolySeries& h, Complex x);

/// Coefficients of x -> p(c0 + c1 x).
PolySeries compose_affine(const PolySeries& p, Complex c0, Complex c1);

/// Heat semigroup for real s > 0 by quadrature: integral F(x + sqrt(s) u) dgamma(u).
template <class F>
auto heat_quadrature(double s, F&& f, double x, const QuadratureRule& rule) {
    if (!(s > 0.0)) throw DomainError("heat_quadrature: time must be real and positive");
    const double root = std::sqrt(s);
    return rule.integrate([&](double u) { return f(x + root * u); });
}

/// (iint P(z1 u + z2 v) dgamma dgamma by tensor quadrature,
///  int P(x sqrt(z1^2 + z2^2)) dgamma by moments in z1^2 + z2^2).
std::pair<Complex, Complex> gaussian_rotation_check(const PolySeries& p, Complex z1, Complex z2,
                                                    const QuadratureRule& rule);

/// (series M_w h(x), Fourier-side value built from the transform of the
/// Gaussian-damped h at a complex frequency). Rejects w^2 = 1.
std::pair<Complex, Complex> mehler_fourier_check(Complex w, const HermiteSeries& h, double x,
                                                 const QuadratureRule& rule);

// Gaussian integrals over the real line.

/// integral_R F(y) exp(-A y^2 + B y) dy by a rule recentred at the modulus peak
/// Re B / (2 Re A) and rescaled to the Re A width. F is sampled on R only.
template <class F>
Complex gaussian_exp_quadrature(F&& f, Complex a, Complex b, const QuadratureRule& rule) {
    const double ra = a.real();
    if (!(ra > 1e-12)) throw DomainError("gaussian_exp_quadrature: Re A must be positive");
    const double scale = std::sqrt(2.0 * ra);
    const double center = b.real() / (2.0 * ra);
    Complex sum{};
    for (int i = 0; i < rule.node_count; ++i) {
        const double u = rule.nodes[i];
        const double y = center + u / scale;
        const Complex expo = -a * y * y + b * y + 0.5 * u * u;
        sum += rule.weights[i] * Complex(f(y)) * std::exp(expo);
    }
    return sum * std::sqrt(2.0 * kPi) / scale;
}

/// integral_R exp(-A y^2 + B y) dy = sqrt(pi/A) exp(B^2 / 4A), Re A > 0.
Complex gaussian_exp_closed(Complex a, Complex b);

/// integral_R P(y) exp(-A y^2 + B y) dy in closed form: contour shift to the
/// complex centre B/2A and Gaussian moments of P.
Complex gaussian_poly_integral(const PolySeries& p, Complex a, Complex b);

/// Fourier transform hat f(xi) = integral f(y) exp(-2 pi i xi y) dy of
/// F(y) exp(-A y^2), evaluated by gaussian_exp_quadrature; xi may be complex.
template <class F>
Complex fourier_damped(F&& f, Complex a, Complex xi, const QuadratureRule& rule) {
    return gaussian_exp_quadrature(std::forward<F>(f), a, Complex(0.0, -2.0 * kPi) * xi, rule);
}

}  // namespace hypflow
