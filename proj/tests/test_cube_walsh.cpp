#include <cmath>

#include "doctest.h"
#include "hypflow/cube_walsh.hpp"
#include "test_support.hpp"

using namespace hypflow;
using hypflow::testing::hermite_reference;
using hypflow::testing::phi_reference;
using hypflow::testing::random_coeffs;

TEST_CASE("Walsh synthesis on a hand-built table") {
    // f = 1 + 2 x_1 - x_1 x_2 on {-1,1}^2; mask bit j set means x_j = -1
    CubeFunction f = CubeFunction::zero(2);
    f.coeffs = {1.0, 2.0, 0.0, -1.0};
    const auto v = walsh_synthesize_all(f);
    CHECK(std::abs(v[0] - 2.0) < 1e-15);   // ( 1,  1)
    CHECK(std::abs(v[1] - 0.0) < 1e-15);   // (-1,  1)
    CHECK(std::abs(v[2] - 4.0) < 1e-15);   // ( 1, -1)
    CHECK(std::abs(v[3] - -2.0) < 1e-15);  // (-1, -1)
    const std::vector<int> x{-1, 1};
    CHECK(std::abs(walsh_synthesize(f, x) - v[1]) < 1e-15);
}

TEST_CASE("Walsh round trip and argument checks") {
    Rng rng(3);
    CubeFunction f = CubeFunction::zero(9);
    for (auto& c : f.coeffs) c = Complex(rng.normal(), rng.normal());
    const auto back = walsh_analyze(walsh_synthesize_all(f));
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) CHECK(std::abs(back.coeffs[i] - f.coeffs[i]) < 1e-13);
    const std::vector<Complex> bad(3);
    CHECK_THROWS_AS(walsh_analyze(bad), InputError);
    const std::vector<int> wrong{1, 0};
    CHECK_THROWS_AS(walsh_synthesize(CubeFunction::zero(2), wrong), InputError);
}

TEST_CASE("T_z^k damps only the last n - k coordinates") {
    CubeFunction f = CubeFunction::zero(3);
    for (auto& c : f.coeffs) c = 1.0;
    const Complex z(0.5, 0.5);
    const auto t = apply_tzk(f, z, 1);
    CHECK(std::abs(t.coeffs[0b001] - 1.0) < 1e-15);
    CHECK(std::abs(t.coeffs[0b010] - z) < 1e-15);
    CHECK(std::abs(t.coeffs[0b111] - z * z) < 1e-15);
    CHECK(std::abs(t.coeffs[0b110] - z * z) < 1e-15);
}

TEST_CASE("phi_symmetric against the elementary symmetric recurrence") {
    Rng rng(5);
    std::vector<Complex> x(7);
    for (auto& v : x) v = Complex(rng.normal(), rng.normal());
    for (int l = 0; l <= 7; ++l) CHECK(std::abs(phi_symmetric(l, x) - phi_reference(l, x)) < 1e-11 * std::max(1.0, std::abs(phi_reference(l, x))));
    const std::vector<Complex> ab{2.0, 3.0};
    CHECK(std::abs(phi_symmetric(2, ab) - 12.0) < 1e-14);  // 2! * 6
    const auto all = phi_symmetric_all(4, x);
    for (int l = 0; l <= 4; ++l) CHECK(std::abs(all[l] - phi_symmetric(l, x)) < 1e-12 * std::max(1.0, std::abs(all[l])));
}

TEST_CASE("phi_block_eval equals the direct evaluation with damped inputs") {
    const int n = 9, k = 4;
    const Complex z(0.2, 0.7);
    const BlockCounts counts{k, 3, 2};
    std::vector<Complex> x;
    const double root = std::sqrt(static_cast<double>(n));
    for (int j = 0; j < k; ++j) x.push_back((j < 3 ? 1.0 : -1.0) / root);
    for (int j = 0; j < n - k; ++j) x.push_back(z * (j < 2 ? 1.0 : -1.0) / root);
    for (int l = 0; l <= 6; ++l) CHECK(std::abs(phi_block_eval(l, n, counts, z) - phi_reference(l, x)) < 1e-12);
    CHECK_THROWS_AS(BlockCounts({4, 5, 0}).validate(n), InputError);
}

TEST_CASE("block weights are binomial probabilities") {
    const int n = 7, k = 3;
    double total = 0.0;
    for (int a = 0; a <= k; ++a)
        for (int b = 0; b <= n - k; ++b) total += BlockCounts{k, a, b}.weight(n);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(BlockCounts{k, 1, 2}.weight(n) == doctest::Approx(3.0 * 6.0 / 128.0).epsilon(1e-14));
}

TEST_CASE("binomial split of phi_L") {
    const std::vector<Complex> x{0.3, -0.5, 1.1, 0.2, Complex(0.1, 0.4)};
    const auto [lhs, rhs] = binomial_split_check(4, 2, x, Complex(0.6, -0.3));
    CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("Beckner expansion for l = 3 is H_3 + (2/n) H_1") {
    for (int n : {5, 12, 40}) {
        const auto e = beckner_expand(n, 3);
        CHECK(std::abs(e.coeffs[3] - 1.0) < 1e-11);
        CHECK(std::abs(e.coeffs[1] - 2.0 / n) < 1e-12);
        CHECK(std::abs(e.coeffs[0]) < 1e-12);
        CHECK(std::abs(e.coeffs[2]) < 1e-12);
        CHECK(e.residual < 1e-12);
    }
    // l = 2: 2 e_2 / n = S^2 - 1 = H_2 exactly
    const auto e2 = beckner_expand(10, 2);
    CHECK(std::abs(e2.coeffs[2] - 1.0) < 1e-12);
    CHECK(std::abs(e2.coeffs[0]) < 1e-12);
    CHECK_THROWS_AS(beckner_expand(3, 4), InputError);
    (void)hermite_reference;
}

TEST_CASE("collapsed and enumerated mixed norms agree") {
    Rng rng(8);
    const SymmetricSpec spec{10, random_coeffs(rng, 3)};
    const Complex z(0.4, 0.3);
    for (int k : {0, 3, 10}) {
        const auto values = walsh_synthesize_all(apply_tzk(spec.materialize(), z, k));
        const double naive = mixed_norm(values, 10, k, 1.5, 3.0);
        CHECK(mixed_norm(collapse_tzk(spec, z, k), 1.5, 3.0) == doctest::Approx(naive).epsilon(1e-12));
        CHECK(mixed_norm_collapsed(spec, z, k, 1.5, 3.0) == doctest::Approx(naive).epsilon(1e-12));
    }
}

TEST_CASE("mixed_norm endpoints reduce to plain norms") {
    const std::vector<Complex> v{1.0, -2.0, Complex(0.0, 3.0), 0.5};
    // k = n: E |v|^p; k = 0: (E |v|^q)^{p/q}
    const double ep = (1.0 + std::pow(2.0, 1.5) + std::pow(3.0, 1.5) + std::pow(0.5, 1.5)) / 4.0;
    CHECK(mixed_norm(v, 2, 2, 1.5, 3.0) == doctest::Approx(ep).epsilon(1e-14));
    const double eq = (1.0 + 8.0 + 27.0 + 0.125) / 4.0;
    CHECK(mixed_norm(v, 2, 0, 1.5, 3.0) == doctest::Approx(std::pow(eq, 0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(mixed_norm(v, 2, 0, 3.0, 1.5), InputError);
    CHECK_THROWS_AS(mixed_norm(v, 2, 3, 1.5, 3.0), InputError);
}

TEST_CASE("symmetric spec evaluation matches the materialized table") {
    Rng rng(2);
    const SymmetricSpec spec{6, random_coeffs(rng, 2)};
    const Complex z(0.1, -0.6);
    const auto values = walsh_synthesize_all(apply_tzk(spec.materialize(), z, 2));
    for (std::uint32_t mask = 0; mask < 64; ++mask) {
        const auto x = cube_point(6, mask);
        BlockCounts c{2, 0, 0};
        for (int j = 0; j < 6; ++j) (j < 2 ? c.a : c.b) += x[j] > 0;
        CHECK(std::abs(spec.eval_tzk(c, z) - values[mask]) < 1e-13);
    }
}
