#pragma once

#include <cmath>
#include <vector>

#include "hypflow/common.hpp"

namespace hypflow::testing {

inline std::vector<Complex> random_coeffs(Rng& rng, int degree) {
    std::vector<Complex> a(degree + 1);
    for (auto& c : a) c = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
    return a;
}

// Plain elementary symmetric polynomial by the O(n^2) recurrence, l! e_l.
inline Complex phi_reference(int l, const std::vector<Complex>& x) {
    std::vector<Complex> e(l + 1, 0.0);
    e[0] = 1.0;
    for (const Complex& v : x)
        for (int j = l; j >= 1; --j) e[j] += v * e[j - 1];
    double f = 1.0;
    for (int j = 2; j <= l; ++j) f *= j;
    return f * e[l];
}

// He_m by the three-term recurrence with plain doubles.
inline double hermite_reference(int m, double x) {
    double h0 = 1.0, h1 = x;
    if (m == 0) return h0;
    for (int k = 1; k < m; ++k) {
        const double h2 = x * h1 - k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

}  // namespace hypflow::testing
