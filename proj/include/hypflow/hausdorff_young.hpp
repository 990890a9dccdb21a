#pragma once

// The sharp Hausdorff-Young inequality through the Gaussian flow, with the
// transform convention hat f(xi) = int f(y) exp(-2 pi i xi y) dy.

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "hypflow/flows.hpp"
#include "hypflow/gauss_hermite.hpp"

namespace hypflow {

/// A_zeta(x) = exp(zeta x - zeta^2 / 2).
Complex exp_a(Complex zeta, Complex x);

struct ExpAtom {
    Complex c{1.0, 0.0};
    Complex t{};
};

/// g(w) = sum c_l exp(t_l w).
struct ExpFamily {
    std::vector<ExpAtom> atoms;

    Complex operator()(Complex w) const;
    /// Phi_s(x, u) = sum c_l A_{t_l sqrt s}(x) A_{t_l z sqrt(1-s)}(u).
    Complex phi_s(double s, Complex z, double x, double u) const;
    /// h(x) = exp(-pi x^2) sum c_l exp(t_l sqrt(2 pi p) x - t_l^2 / 2).
    Complex h(double p, double x) const;
    /// Transform of h in closed form, atom by atom.
    Complex h_hat(double p, double u) const;
};

/// y -> P(y) * atom(y).
struct PolyGaussian {
    PolySeries poly;
    GaussianAtom atom;

    Complex operator()(Complex y) const { return poly(y) * atom(y); }
};

/// An input for the flow phi(s): either g~ as a Hermite series, or f as a
/// polynomial times a Gaussian atom. p in (1, 2], q = p / (p - 1).
class HYInput {
public:
    HYInput(HermiteSeries g_tilde, double p);
    HYInput(PolyGaussian f, double p);

    double p() const { return p_; }
    double q() const { return q_; }
    /// z = i sqrt(p - 1).
    Complex z() const;
    bool is_polynomial() const { return std::holds_alternative<HermiteSeries>(rep_); }
    const HermiteSeries* hermite() const { return std::get_if<HermiteSeries>(&rep_); }

    /// f(y) = g~(y) exp(-y^2 / 2p) (2 pi)^{-1/2p} as a PolyGaussian.
    PolyGaussian f() const;
    /// g~(y) = f(y) exp(y^2 / 2p) (2 pi)^{1/2p} as a PolyGaussian.
    PolyGaussian g_tilde() const;

private:
    std::variant<HermiteSeries, PolyGaussian> rep_;
    double p_;
    double q_;
};

/// Max relative mismatch of g~(y) exp(-y^2/2p) (2 pi)^{-1/2p} against f(y) at ys.
double substitution_error(const HYInput& in, const std::vector<double>& ys);

/// (J(s) p^{1/2} / q^{p/2q})^{1/p}. J comes from janson_mehler for a Hermite
/// input and from the closed-form heat flow of the atom otherwise.
double phi_value(const HYInput& in, double s, const JansonOptions& opts = {});
FlowReport phi_flow(const HYInput& in, const std::vector<double>& s_grid, const JansonOptions& opts = {});

/// J(s) for the input's g~ at z = i sqrt(p - 1), by the atom path.
double janson_atom(const PolyGaussian& g_tilde, const ExponentTriple& t, double s, const JansonOptions& opts = {});

/// (||hat f||_q, (p^{1/p} / q^{1/q})^{1/2} ||f||_p).
std::pair<double, double> hy_endpoints(const HYInput& in);

/// (p^{1/p} / q^{1/q})^{1/2}.
double hy_constant(double p);

/// int_R |v(y)|^r dy for a Gaussian-decaying v peaked inside [lo, hi] with
/// tails negligible outside. Interior near-zeros of |v| become breakpoints.
double line_power_integral(const std::function<Complex(double)>& v, double r, double lo, double hi);

/// (quadrature of int e^{zeta (x + iy)} dgamma(y), exp(zeta x - zeta^2 / 2)).
std::pair<Complex, Complex> lemma_a_check(Complex zeta, Complex x, const QuadratureRule& rule);

/// (quadrature of the transform of e^{t sqrt(2 pi p) x - t^2/2} e^{-pi x^2} at u,
///  exp(-i sqrt(2 pi p) t u - (i t sqrt(p/q))^2 / 2) e^{-pi u^2}).
std::pair<Complex, Complex> lemma_f_check(Complex t, double p, double u, const QuadratureRule& rule);

struct ExpFlowResult {
    FlowReport report;
    double phi0 = 0.0;
    double phi1 = 0.0;
    double phi0_closed = 0.0;  // q^{p/2q} ||hat h||_q^p
    double phi1_closed = 0.0;  // p^{1/2} ||h||_p^p
    bool endpoints_ordered = true;  // phi0 <= phi1 (1 + 1e-10)
};

/// phi(s) = int ( int |Phi_s(x, u)|^q dgamma(u) )^{p/q} dgamma(x), z = i sqrt(p/q):
/// inner average over u, outer over x, and no outer 1/p power.
double exp_phi_value(const ExpFamily& fam, double p, double s);
ExpFlowResult exp_flow_phi(const ExpFamily& fam, double p, const std::vector<double>& s_grid);

struct HYVerify {
    double lhs = 0.0;  // ||hat h||_q
    double rhs = 0.0;  // p^{1/2p} q^{-1/2q} ||h||_p
    bool holds = true;  // lhs <= rhs + 1e-8
};

/// Requires real t_l.
HYVerify hy_verify(const ExpFamily& fam, double p);

}  // namespace hypflow
