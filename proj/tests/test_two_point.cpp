#include <cmath>

#include "doctest.h"
#include "hypflow/two_point.hpp"

using namespace hypflow;

TEST_CASE("exponent triples are validated") {
    CHECK_THROWS_AS(ExponentTriple(3.0, 2.0, 0.5), InputError);
    CHECK_THROWS_AS(ExponentTriple(0.5, 2.0, 0.5), InputError);
    CHECK_THROWS_AS(ExponentTriple(2.0, 4.0, Complex(1.0, 0.1)), InputError);
    CHECK_NOTHROW(ExponentTriple(2.0, 2.0, 1.0));
}

TEST_CASE("two-point sides by hand") {
    const ExponentTriple t(2.0, 4.0, 0.5);
    const auto m = two_point_margin(1.0, 1.0, t);
    // lhs = ((1.5^4 + 0.5^4)/2)^{1/4}, rhs = ((4 + 0) / 2)^{1/2}
    CHECK(m.lhs == doctest::Approx(std::pow((std::pow(1.5, 4) + std::pow(0.5, 4)) / 2.0, 0.25)).epsilon(1e-14));
    CHECK(m.rhs == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(m.margin == doctest::Approx(m.rhs - m.lhs).epsilon(1e-14));
}

TEST_CASE("infinitesimal margin formula") {
    const ExponentTriple t(2.0, 4.0, Complex(0.0, 0.5));
    const Complex w(0.6, 0.8);
    const auto m = infinitesimal_margin(w, t);
    // wz = (-0.4, 0.3): (q-2) 0.16 + 0.25; (p-2) 0.36 + 1
    CHECK(m.lhs == doctest::Approx(2.0 * 0.16 + 0.25).epsilon(1e-14));
    CHECK(m.rhs == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("classical real hypercontractive range") {
    // real z holds for the pair (2, 4) iff z <= 1/sqrt 3
    CHECK(holds(extremal_ratio(ExponentTriple(2.0, 4.0, 0.55))));
    CHECK_FALSE(holds(extremal_ratio(ExponentTriple(2.0, 4.0, 0.62))));
    CHECK(real_failure_threshold(2.0, 4.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(2e-3));
}

TEST_CASE("ratio symmetries") {
    const ExponentTriple t(1.7, 3.2, Complex(0.3, 0.4));
    const Complex b(0.7, -1.3);
    CHECK(two_point_ratio(b, t) == doctest::Approx(two_point_ratio(-b, t)).epsilon(1e-14));
    const ExponentTriple tc(1.7, 3.2, Complex(0.3, -0.4));
    CHECK(two_point_ratio(std::conj(b), tc) == doctest::Approx(two_point_ratio(b, t)).epsilon(1e-14));
}

TEST_CASE("identity operator has supremal ratio one") {
    const auto r = extremal_ratio(ExponentTriple(2.0, 2.0, 1.0));
    CHECK(r.sup_ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(holds(r));
    // p = q = 2, z = 0.5: the a = 0 witness gives |z| and a = 1 gives at most that
    const auto half = extremal_ratio(ExponentTriple(2.0, 2.0, 0.5));
    CHECK(half.sup_ratio >= 0.5 - 1e-12);
    CHECK(half.sup_ratio <= 1.0);
}

TEST_CASE("region scan cells obey the implication") {
    const auto cells = region_scan(2.0, 4.0, 0.25);
    CHECK(cells.size() > 10);
    for (const auto& c : cells) {
        CHECK(std::abs(c.z) <= 1.0 + 1e-12);
        if (c.global_holds) CHECK(c.infinitesimal_holds);
    }
    CHECK_THROWS_AS(region_scan(2.0, 4.0, 0.001), InputError);
}

TEST_CASE("infinitesimal scan on the real axis") {
    // z real: margin(theta=0) = (p-1) - (q-1) z^2
    const auto s = infinitesimal_scan(ExponentTriple(2.0, 4.0, 0.5));
    CHECK(s.min_margin <= 1.0 - 3.0 * 0.25 + 1e-12);
    CHECK(s.min_margin >= -1e-12);
}
