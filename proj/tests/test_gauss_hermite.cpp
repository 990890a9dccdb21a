#include <cmath>

#include "doctest.h"
#include "hypflow/gauss_hermite.hpp"
#include "test_support.hpp"

using namespace hypflow;
using hypflow::testing::hermite_reference;
using hypflow::testing::random_coeffs;

TEST_CASE("small rules match the textbook nodes and weights") {
    const auto r2 = gh_rule(2);
    CHECK(r2.nodes[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(r2.nodes[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r2.weights[0] == doctest::Approx(0.5).epsilon(1e-15));

    const auto r3 = gh_rule(3);
    CHECK(r3.nodes[0] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r3.nodes[1] == 0.0);
    CHECK(r3.weights[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(r3.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("rule sizes outside [1, 512] are rejected") {
    CHECK_THROWS_AS(gh_rule(0), InputError);
    CHECK_THROWS_AS(gh_rule(kMaxNodes + 1), InputError);
}

TEST_CASE("weights sum to one and nodes are symmetric") {
    for (int n : {1, 7, 64, 200, 512}) {
        const auto& r = cached_rule(n);
        double sum = 0.0;
        for (double w : r.weights) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        for (int i = 0; i < n; ++i) CHECK(r.nodes[i] == -r.nodes[n - 1 - i]);
    }
}

TEST_CASE("hermite_eval follows the recurrence and integrates (x + iy)^l") {
    for (int m = 0; m <= 10; ++m) {
        const double x = 0.37 * m - 1.1;
        CHECK(std::abs(hermite_eval(m, x) - hermite_reference(m, x)) <= 1e-12 * std::max(1.0, std::abs(hermite_reference(m, x))));
    }
    CHECK(std::abs(hermite_eval(3, 2.0) - 2.0) < 1e-15);  // 8 - 6
    const auto& rule = cached_rule(16);
    const Complex x(0.3, -0.4);
    const Complex q = rule.integrate([&](double y) { return std::pow(x + Complex(0.0, y), 5); });
    CHECK(std::abs(q - hermite_eval(5, x)) < 1e-12);
}

TEST_CASE("basis change is exact on a known pair") {
    // x^3 = H_3 + 3 H_1
    const auto h = to_hermite(PolySeries{{0.0, 0.0, 0.0, 1.0}});
    REQUIRE(h.coeffs.size() == 4);
    CHECK(std::abs(h.coeffs[1] - 3.0) < 1e-14);
    CHECK(std::abs(h.coeffs[3] - 1.0) < 1e-14);
    CHECK(std::abs(h.coeffs[0]) < 1e-14);
    const auto back = to_monomial(h);
    CHECK(std::abs(back.coeffs[3] - 1.0) < 1e-14);
    CHECK(std::abs(back.coeffs[1]) < 1e-14);
}

TEST_CASE("gaussian_smooth turns monomial coefficients into Hermite coefficients") {
    const PolySeries g{{1.0, Complex(0.5, 1.0), 2.0}};
    const auto gt = gaussian_smooth(g);
    const auto& rule = cached_rule(8);
    const Complex x(0.7, 0.2);
    const Complex brute = rule.integrate([&](double y) { return g(x + Complex(0.0, y)); });
    CHECK(std::abs(gt(x) - brute) < 1e-13);
}

TEST_CASE("Mehler semigroup scales H_l by w^l and matches its kernel") {
    const HermiteSeries h{{0.0, 0.0, 1.0}};
    const Complex w(0.3, 0.4);
    const auto m = mehler_apply_series(w, h);
    CHECK(std::abs(m.coeffs[2] - w * w) < 1e-15);
    CHECK_THROWS_AS(mehler_apply_series(Complex(1.5, 0.0), h), DomainError);
    Rng rng(11);
    const HermiteSeries g{random_coeffs(rng, 4)};
    const auto [series, kernel] = mehler_kernel_check(0.6, g, 0.8, cached_rule(64));
    CHECK(std::abs(series - kernel) < 1e-11 * std::abs(series));
}

TEST_CASE("heat semigroup on polynomials") {
    // E (x + sqrt(s) G)^2 = x^2 + s
    const PolySeries x2{{0.0, 0.0, 1.0}};
    const Complex s(0.4, -0.2);
    const Complex x(1.3, 0.1);
    CHECK(std::abs(heat_poly(s, x2, x) - (x * x + s)) < 1e-14);
    // P_{-1} x^4 = H_4
    const PolySeries x4{{0.0, 0.0, 0.0, 0.0, 1.0}};
    CHECK(std::abs(heat_poly(-1.0, x4, 0.9) - hermite_reference(4, 0.9)) < 1e-13);
    const auto q = heat_quadrature(0.5, [](double y) { return y * y; }, 2.0, cached_rule(8));
    CHECK(q == doctest::Approx(4.5).epsilon(1e-14));
    CHECK_THROWS_AS(heat_quadrature(0.0, [](double y) { return y; }, 0.0, cached_rule(4)), DomainError);
}

TEST_CASE("compose_affine substitutes c0 + c1 x") {
    const PolySeries p{{1.0, 2.0, 3.0}};
    const auto c = compose_affine(p, 2.0, Complex(0.0, 1.0));
    const Complex x(0.3, 0.7);
    CHECK(std::abs(c(x) - p(2.0 + Complex(0.0, 1.0) * x)) < 1e-13);
}

TEST_CASE("heat_atom matches the closed Gaussian convolution") {
    // P_tau e^{-a y^2}(x) = (1 + 2 a tau)^{-1/2} exp(-a x^2 / (1 + 2 a tau))
    const GaussianAtom g{1.0, 0.7, 0.0};
    const double tau = 0.9;
    const auto h = heat_atom(tau, g);
    const double d = 1.0 + 2.0 * 0.7 * tau;
    for (double x : {-1.2, 0.0, 0.4}) CHECK(std::abs(h(x) - std::exp(-0.7 * x * x / d) / std::sqrt(d)) < 1e-14);
    CHECK_THROWS_AS(heat_atom(-2.0, g), DomainError);
}

TEST_CASE("mehler_apply_atom at w = +-1 and against quadrature") {
    const GaussianAtom g{Complex(1.0, 0.5), Complex(0.3, 0.1), Complex(0.2, -0.4)};
    CHECK(std::abs(mehler_apply_atom(1.0, g, 0.6) - g(0.6)) < 1e-14);
    CHECK(std::abs(mehler_apply_atom(-1.0, g, 0.6) - g(-0.6)) < 1e-14);
    const double w = 0.5, root = std::sqrt(0.75);
    const Complex brute = cached_rule(128).integrate([&](double y) { return g(w * 0.6 + root * y); });
    CHECK(std::abs(mehler_apply_atom(w, g, 0.6) - brute) < 1e-12);
}

TEST_CASE("Gaussian integrals over the line") {
    CHECK(std::abs(gaussian_exp_closed(1.0, 0.0) - std::sqrt(kPi)) < 1e-15);
    // int y^2 e^{-y^2} dy = sqrt(pi) / 2
    CHECK(std::abs(gaussian_poly_integral(PolySeries{{0.0, 0.0, 1.0}}, 1.0, 0.0) - std::sqrt(kPi) / 2.0) < 1e-14);
    const Complex a(1.2, 0.3), b(0.5, -0.8);
    const Complex quad = gaussian_exp_quadrature([](double) { return 1.0; }, a, b, cached_rule(64));
    CHECK(std::abs(quad - gaussian_exp_closed(a, b)) < 1e-13);
    // transform of e^{-pi y^2} is e^{-pi xi^2}
    const Complex fh = fourier_damped([](double) { return 1.0; }, kPi, 0.7, cached_rule(64));
    CHECK(std::abs(fh - std::exp(-kPi * 0.49)) < 1e-14);
    CHECK(std::abs(GaussianAtom{1.0, 0.0, 0.0}.gamma_integral() - 1.0) < 1e-15);
    CHECK_THROWS_AS((GaussianAtom{1.0, -1.0, 0.0}.gamma_integral()), DomainError);
}

TEST_CASE("rotation identity for the Gaussian pair") {
    const PolySeries p{{0.0, 1.0, 0.0, 0.0, 1.0}};
    const auto [lhs, rhs] = gaussian_rotation_check(p, Complex(0.6, 0.2), Complex(0.1, 0.8), cached_rule(16));
    CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("Fourier-side Mehler check") {
    const HermiteSeries h{{1.0, 0.5, -0.25, 0.1}};
    const auto [series, fourier] = mehler_fourier_check(0.4, h, 0.3, cached_rule(96));
    CHECK(std::abs(series - fourier) < 1e-10 * std::abs(series));
}

TEST_CASE("integrate_adaptive and refine_nodes") {
    auto r = integrate_adaptive([](double x) { return std::cos(x); });
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
    int calls = 0;
    CHECK_THROWS_AS(refine_nodes([&](int n) { return static_cast<double>(++calls + n); }, 64, 1e-12, 1e-12, "test"),
                    AccuracyError);
    CHECK(refine_nodes([](int) { return 2.0; }, 16, 1e-12, 1e-12, "test") == 2.0);
}
