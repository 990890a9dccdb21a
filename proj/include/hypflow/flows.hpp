#pragma once

// Monotone flows: the discrete map k -> E^k (E_{n-k} |T_z^k f|^q)^{p/q} on the
// cube, the continuous Gaussian flow J(s) with three evaluators, and the
// discrete-to-continuous convergence experiment.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hypflow/cube_walsh.hpp"
#include "hypflow/gauss_hermite.hpp"
#include "hypflow/two_point.hpp"

namespace hypflow {

struct FlowSample {
    double parameter = 0.0;
    double value = 0.0;
};

struct FlowVerdict {
    bool nondecreasing = true;
    int violated_at = -1;      // index i with value[i] < value[i-1] - tolerance
    double deficit = 0.0;      // value[violated_at] - value[violated_at - 1]
    double worst_delta = 0.0;  // min_i value[i] - value[i-1]; 0 for fewer than 2 samples
};

struct FlowReport {
    std::string parameter_name;
    std::vector<FlowSample> samples;
    double tol_abs = 1e-10;
    double tol_rel = 1e-10;
    FlowVerdict verdict;
};

/// Decrease flagged only if value[i+1] < value[i] - (tol_abs + tol_rel |value[i]|).
FlowVerdict compute_verdict(const std::vector<FlowSample>& samples, double tol_abs, double tol_rel);

/// Builds a report and its verdict. Throws InputError unless parameters are
/// strictly increasing.
FlowReport make_flow_report(std::string parameter_name, std::vector<FlowSample> samples, double tol_abs = 1e-10,
                            double tol_rel = 1e-10);

/// Enumeration backend for CubeFunction (n <= 24), collapsed backend for
/// SymmetricSpec. ks must lie in [0, n]; they are sorted on output.
FlowReport discrete_flow(const CubeFunction& f, const ExponentTriple& t, std::vector<int> ks);
FlowReport discrete_flow(const SymmetricSpec& f, const ExponentTriple& t, std::vector<int> ks);

std::vector<int> all_ks(int n);

struct JansonOptions {
    int nodes = 0;           // fixed Gauss-Hermite rule at both levels; 0 selects the adaptive scheme
    double rel_tol = 1e-12;  // Gauss-Hermite doubling stops at this relative agreement
};

// J(s) = int ( int |G(u, x)|^q dgamma(x) )^{p/q} dgamma(u), where G is the
// Gaussian double average of g at (u+iv) sqrt(s) + z (x+iy) sqrt(1-s).
// Adaptive scheme: Gauss-Hermite doubling from 32 to 256 nodes at both levels.
// A level that does not settle is redone by tanh-sinh, cut where the
// integration line passes closest to a complex root of the inner polynomial.

/// Inner (v, y) average by an exact tensor rule on the polynomial g.
double janson_quadrature(const PolySeries& g, const ExponentTriple& t, double s, const JansonOptions& opts = {});

/// Inner average in closed form: sum a_l h_l(X; sigma), h_{l+1} = X h_l - l sigma h_{l-1},
/// X = u sqrt(s) + z x sqrt(1-s), sigma = s + (1-s) z^2.
double janson_mehler(const PolySeries& g, const ExponentTriple& t, double s, const JansonOptions& opts = {});

/// Composition of heat flows: P_s^u (P_{1-s}^x |P_{(1-s)(1-z^2)} g~(u+zx)|^q (0))^{p/q} (0).
/// s = 0 and s = 1 delegate to janson_mehler; s outside [0, 1] is an InputError.
double janson_heat(const HermiteSeries& g_tilde, const ExponentTriple& t, double s, const JansonOptions& opts = {});

enum class Evaluator { Mehler, Quadrature, Heat };

double janson_value(Evaluator e, const PolySeries& g, const ExponentTriple& t, double s,
                    const JansonOptions& opts = {});

/// Equispaced grid on [0, 1] with `points` entries including both ends.
std::vector<double> default_s_grid(int points = 21);

/// Report over s_grid. With spot_checks, the quadrature evaluator (or Mehler,
/// if it is the primary) is rerun at the first, middle and last grid points and
/// a relative disagreement above 1e-6 raises EvaluatorMismatch.
FlowReport janson_flow(const PolySeries& g, const ExponentTriple& t, const std::vector<double>& s_grid,
                       Evaluator evaluator = Evaluator::Mehler, bool spot_checks = true,
                       const JansonOptions& opts = {});

struct MomentCheck {
    Complex lhs;
    Complex rhs;
    double abs_diff = 0.0;
};

/// lhs = E^y ((S'_x + i S'_y) + z (S''_x + i S''_y))^L / n^{L/2} over the y
/// block sums with binomial weights; rhs = phi_L(x'/sqrt n, z x''/sqrt n).
/// Requires L <= 12.
MomentCheck mixed_moment_check(const BlockCounts& counts, int n, Complex z, int l);
MomentCheck mixed_moment_check(std::span<const int> x, int k, Complex z, int l);

struct ConvergenceRow {
    int n = 0;
    int k = 0;
    double discrete_value = 0.0;
    double continuous_value = 0.0;
    double abs_error = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::optional<double> slope;  // least squares on (log n, log error), rows with error > 1e-13
};

/// f_n = sum a_l phi_l(x / sqrt n) against J(s) for g(x) = sum a_l x^l.
/// n_list must be strictly increasing; k = round(s n).
ConvergenceTable convergence_experiment(const std::vector<Complex>& a, const ExponentTriple& t, double s,
                                        const std::vector<int>& n_list, const JansonOptions& opts = {});

std::optional<double> fit_loglog_slope(const std::vector<ConvergenceRow>& rows, double floor = 1e-13);

}  // namespace hypflow
