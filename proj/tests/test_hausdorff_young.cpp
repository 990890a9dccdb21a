#include <cmath>

#include "doctest.h"
#include "hypflow/hausdorff_young.hpp"
#include "test_support.hpp"

using namespace hypflow;
using hypflow::testing::random_coeffs;

namespace {

HYInput gaussian_input(double p) { return HYInput(PolyGaussian{PolySeries{{1.0}}, GaussianAtom{1.0, kPi, 0.0}}, p); }

}  // namespace

TEST_CASE("sharp constant values") {
    CHECK(hy_constant(2.0) == doctest::Approx(1.0).epsilon(1e-15));
    const double p = 1.5, q = 3.0;
    CHECK(hy_constant(p) == doctest::Approx(std::sqrt(std::pow(p, 1.0 / p) / std::pow(q, 1.0 / q))).epsilon(1e-15));
}

TEST_CASE("inputs are validated") {
    CHECK_THROWS_AS(gaussian_input(1.0), InputError);
    CHECK_THROWS_AS(gaussian_input(2.5), InputError);
    CHECK(gaussian_input(4.0 / 3.0).q() == doctest::Approx(4.0));
    CHECK(std::abs(gaussian_input(1.5).z() - Complex(0.0, std::sqrt(0.5))) < 1e-15);
}

TEST_CASE("Gaussian endpoints equal the closed-form norms") {
    for (double p : {4.0 / 3.0, 1.5, 2.0}) {
        const double q = p / (p - 1.0);
        const auto [fhat, scaled] = hy_endpoints(gaussian_input(p));
        CHECK(fhat == doctest::Approx(std::pow(q, -0.5 / q)).epsilon(1e-12));
        CHECK(scaled == doctest::Approx(fhat).epsilon(1e-12));
    }
}

TEST_CASE("Plancherel at p = 2 for any input") {
    Rng rng(21);
    const HYInput in(HermiteSeries{random_coeffs(rng, 3)}, 2.0);
    const auto [fhat, scaled] = hy_endpoints(in);
    CHECK(fhat == doctest::Approx(scaled).epsilon(1e-11));
}

TEST_CASE("strict inequality away from Gaussians") {
    const HYInput in(PolyGaussian{PolySeries{{0.0, 1.0}}, GaussianAtom{1.0, kPi, 0.0}}, 1.5);
    const auto [fhat, scaled] = hy_endpoints(in);
    CHECK(fhat < scaled * (1.0 - 1e-3));
}

TEST_CASE("substitution links f and g~") {
    Rng rng(7);
    const HYInput in(HermiteSeries{random_coeffs(rng, 2)}, 1.5);
    CHECK(substitution_error(in, {-2.0, -0.3, 0.0, 1.1, 3.0}) < 1e-13);
    const PolyGaussian f = in.f();
    const double y = 0.7;
    const Complex want = (*in.hermite())(y) * std::exp(-y * y / 3.0) * std::pow(2.0 * kPi, -1.0 / 3.0);
    CHECK(std::abs(f(y) - want) < 1e-13);
}

TEST_CASE("phi is constant for the extremizer and links to the endpoints") {
    const HYInput g = gaussian_input(4.0 / 3.0);
    const double v0 = phi_value(g, 0.0);
    for (double s : {0.3, 0.6, 1.0}) CHECK(phi_value(g, s) == doctest::Approx(v0).epsilon(1e-10));

    const HYInput h(HermiteSeries{{1.0, 1.0}}, 1.5);
    const auto [fhat, scaled] = hy_endpoints(h);
    CHECK(phi_value(h, 0.0) == doctest::Approx(fhat).epsilon(1e-9));
    CHECK(phi_value(h, 1.0) == doctest::Approx(scaled).epsilon(1e-9));
    CHECK(phi_flow(h, default_s_grid(6)).verdict.nondecreasing);
}

TEST_CASE("atom path equals the Mehler evaluator") {
    const HYInput in(HermiteSeries{{0.5, Complex(0.2, 1.0), -0.3}}, 1.5);
    const ExponentTriple t(in.p(), in.q(), in.z());
    for (double s : {0.0, 0.45, 1.0})
        CHECK(janson_atom(in.g_tilde(), t, s) ==
              doctest::Approx(janson_mehler(PolySeries{in.hermite()->coeffs}, t, s)).epsilon(1e-9));
}

TEST_CASE("exponential atoms and their transforms") {
    const Complex zeta(0.3, -0.7), x(1.1, 0.2);
    CHECK(std::abs(exp_a(zeta, x) - std::exp(zeta * x - zeta * zeta / 2.0)) < 1e-15);
    const auto& rule = cached_rule(96);
    const auto [qa, ca] = lemma_a_check(zeta, x, rule);
    CHECK(std::abs(qa - ca) < 1e-13 * std::abs(ca));
    const auto [qf, cf] = lemma_f_check(0.8, 1.5, 0.4, rule);
    CHECK(std::abs(qf - cf) < 1e-13);

    const ExpFamily fam{{{1.0, 0.5}, {Complex(0.0, 0.4), -1.0}}};
    const double p = 4.0 / 3.0;
    const double u = 0.35;
    const Complex brute = gaussian_exp_quadrature(
        [&](double y) { return fam.h(p, y) * std::exp(kPi * y * y); }, kPi, Complex(0.0, -2.0 * kPi * u), rule);
    CHECK(std::abs(fam.h_hat(p, u) - brute) < 1e-12);
}

TEST_CASE("line_power_integral of a Gaussian") {
    // int e^{-2 pi y^2} dy = 2^{-1/2}
    CHECK(line_power_integral([](double y) { return Complex(std::exp(-kPi * y * y)); }, 2.0, -8.0, 8.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("exponential-family flow and verification") {
    const ExpFamily fam{{{1.0, 0.5}, {-0.3, -1.1}}};
    const auto r = exp_flow_phi(fam, 4.0 / 3.0, default_s_grid(5));
    CHECK(r.report.verdict.nondecreasing);
    CHECK(r.endpoints_ordered);
    CHECK(r.phi0 == doctest::Approx(r.phi0_closed).epsilon(1e-10));
    CHECK(r.phi1 == doctest::Approx(r.phi1_closed).epsilon(1e-10));
    const auto v = hy_verify(fam, 4.0 / 3.0);
    CHECK(v.holds);
    CHECK(v.lhs < v.rhs);
    const auto eq = hy_verify(ExpFamily{{{1.0, 0.0}}}, 1.5);
    CHECK(eq.lhs == doctest::Approx(eq.rhs).epsilon(1e-10));
    CHECK_THROWS_AS(hy_verify(ExpFamily{{{1.0, Complex(0.0, 1.0)}}}, 1.5), InputError);
}
