#include "hypflow/cube_walsh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "hypflow/gauss_hermite.hpp"

namespace hypflow {

namespace {

void check_dim(int n) {
    if (n < 0 || n > kMaxEnumerationDim) throw InputError("cube dimension outside enumeration range 0..24");
}

void hadamard_inplace(std::vector<Complex>& v) {
    for (std::size_t h = 1; h < v.size(); h <<= 1)
        for (std::size_t i = 0; i < v.size(); i += 2 * h)
            for (std::size_t j = i; j < i + h; ++j) {
                const Complex x = v[j];
                const Complex y = v[j + h];
                v[j] = x + y;
                v[j + h] = x - y;
            }
}

Complex ipow(Complex z, int e) {
    Complex r{1.0, 0.0};
    for (int i = 0; i < e; ++i) r *= z;
    return r;
}

// Coefficients t^0..t^L of (1 + c t)^plus (1 - c t)^minus, factored as
// (1 - c^2 t^2)^min(plus, minus) (1 +- c t)^|plus - minus| so no term grows
// with n when c = 1/sqrt(n): every coefficient stays O(1) on balanced points.
std::vector<Complex> pair_series(int plus, int minus, Complex c, int max_l) {
    const int paired = std::min(plus, minus);
    const int rest = std::abs(plus - minus);
    const Complex lin = (plus >= minus) ? c : -c;
    std::vector<Complex> sq(max_l + 1, Complex{});
    const Complex c2 = -c * c;
    Complex pw{1.0, 0.0};
    for (int j = 0; 2 * j <= max_l && j <= paired; ++j) {
        sq[2 * j] = binomial(paired, j) * pw;
        pw *= c2;
    }
    std::vector<Complex> li(max_l + 1, Complex{});
    pw = Complex{1.0, 0.0};
    for (int j = 0; j <= max_l && j <= rest; ++j) {
        li[j] = binomial(rest, j) * pw;
        pw *= lin;
    }
    std::vector<Complex> out(max_l + 1, Complex{});
    for (int i = 0; i <= max_l; ++i) {
        if (sq[i] == Complex{}) continue;
        for (int j = 0; i + j <= max_l; ++j) out[i + j] += sq[i] * li[j];
    }
    return out;
}

// r! [t^r] (s1 * s2) for r = 0..L.
std::vector<Complex> product_scaled(const std::vector<Complex>& s1, const std::vector<Complex>& s2, int max_l) {
    std::vector<Complex> out(max_l + 1, Complex{});
    for (int r = 0; r <= max_l; ++r) {
        Complex acc{};
        for (int i = 0; i <= r; ++i) acc += s1[i] * s2[r - i];
        out[r] = acc * factorial(r);
    }
    return out;
}

double log_half_binomial(int m, int j) {
    return log_binomial(m, j) - m * std::log(2.0);
}

}  // namespace

void validate_exponents(double p, double q) {
    if (!(p >= 1.0)) throw InputError("exponent p must be >= 1");
    if (!(q >= p)) throw InputError("exponents must satisfy p <= q");
    if (!std::isfinite(q)) throw InputError("exponent q must be finite");
}

CubeFunction CubeFunction::zero(int n) {
    check_dim(n);
    return CubeFunction{n, std::vector<Complex>(std::size_t{1} << n)};
}

std::vector<int> cube_point(int n, std::uint32_t mask) {
    std::vector<int> x(n);
    for (int j = 0; j < n; ++j) x[j] = ((mask >> j) & 1u) ? -1 : 1;
    return x;
}

Complex walsh_synthesize(const CubeFunction& f, std::span<const int> x) {
    if (static_cast<int>(x.size()) != f.n) throw InputError("walsh_synthesize: point has wrong dimension");
    for (int xi : x)
        if (xi != 1 && xi != -1) throw InputError("walsh_synthesize: coordinates must be +1 or -1");
    const std::size_t size = std::size_t{1} << f.n;
    // W_S built incrementally from W_{S without its lowest bit}.
    std::vector<int> w(size);
    w[0] = 1;
    Complex acc = f.coeffs[0];
    for (std::size_t s = 1; s < size; ++s) {
        const int low = std::countr_zero(s);
        w[s] = w[s & (s - 1)] * x[low];
        acc += f.coeffs[s] * static_cast<double>(w[s]);
    }
    return acc;
}

std::vector<Complex> walsh_synthesize_all(const CubeFunction& f) {
    std::vector<Complex> v = f.coeffs;
    hadamard_inplace(v);
    return v;
}

CubeFunction walsh_analyze(std::span<const Complex> values) {
    const std::size_t len = values.size();
    if (len == 0 || !std::has_single_bit(len)) throw InputError("walsh_analyze: length must be a power of two");
    const int n = std::countr_zero(len);
    check_dim(n);
    std::vector<Complex> v(values.begin(), values.end());
    hadamard_inplace(v);
    const double inv = 1.0 / static_cast<double>(len);
    for (auto& c : v) c *= inv;
    return CubeFunction{n, std::move(v)};
}

CubeFunction apply_tzk(const CubeFunction& f, Complex z, int k) {
    if (k < 0 || k > f.n) throw InputError("apply_tzk: k outside 0..n");
    std::vector<Complex> zpow(f.n + 1);
    zpow[0] = 1.0;
    for (int e = 1; e <= f.n; ++e) zpow[e] = zpow[e - 1] * z;
    CubeFunction out = f;
    for (std::size_t s = 0; s < out.coeffs.size(); ++s)
        out.coeffs[s] *= zpow[std::popcount(static_cast<std::uint64_t>(s >> k))];
    return out;
}

std::vector<Complex> phi_symmetric_all(int max_l, std::span<const Complex> inputs) {
    if (max_l < 0) throw InputError("phi_symmetric: negative degree");
    std::vector<Complex> e(max_l + 1, Complex{});
    e[0] = 1.0;
    for (const Complex& x : inputs)
        for (int l = max_l; l >= 1; --l) e[l] += x * e[l - 1];
    for (int l = 0; l <= max_l; ++l) e[l] *= factorial(l);
    return e;
}

Complex phi_symmetric(int l, std::span<const Complex> inputs) {
    if (l > static_cast<int>(inputs.size())) return {};
    return phi_symmetric_all(l, inputs)[l];
}

void BlockCounts::validate(int n) const {
    if (k < 0 || k > n) throw InputError("BlockCounts: k outside 0..n");
    if (a < 0 || a > k) throw InputError("BlockCounts: a outside 0..k");
    if (b < 0 || b > n - k) throw InputError("BlockCounts: b outside 0..n-k");
}

double BlockCounts::log_weight(int n) const {
    return log_half_binomial(k, a) + log_half_binomial(n - k, b);
}

double BlockCounts::weight(int n) const {
    return std::exp(log_weight(n));
}

std::vector<Complex> phi_block_all(int max_l, int n, const BlockCounts& counts, Complex z) {
    counts.validate(n);
    if (n == 0) {
        std::vector<Complex> out(max_l + 1, Complex{});
        out[0] = 1.0;
        return out;
    }
    const double c = 1.0 / std::sqrt(static_cast<double>(n));
    const auto s1 = pair_series(counts.a, counts.k - counts.a, c, max_l);
    const auto s2 = pair_series(counts.b, n - counts.k - counts.b, z * c, max_l);
    return product_scaled(s1, s2, max_l);
}

Complex phi_block_eval(int l, int n, const BlockCounts& counts, Complex z) {
    if (l < 0) throw InputError("phi_block_eval: negative degree");
    return phi_block_all(l, n, counts, z)[l];
}

std::pair<Complex, Complex> binomial_split_check(int l, int k, std::span<const Complex> x, Complex z) {
    if (k < 0 || k > static_cast<int>(x.size())) throw InputError("binomial_split_check: k outside 0..n");
    std::vector<Complex> scaled(x.begin(), x.end());
    for (std::size_t j = k; j < scaled.size(); ++j) scaled[j] *= z;
    const Complex lhs = phi_symmetric(l, scaled);
    const auto head = phi_symmetric_all(l, x.first(k));
    const auto tail = phi_symmetric_all(l, x.subspan(k));
    const int n1 = k;
    const int n2 = static_cast<int>(x.size()) - k;
    Complex rhs{};
    for (int m = 0; m <= l; ++m) {
        if (l - m > n1 || m > n2) continue;
        rhs += binomial(l, m) * head[l - m] * tail[m] * ipow(z, m);
    }
    return {lhs, rhs};
}

BecknerExpansion beckner_expand(int n, int l) {
    if (l < 0 || l > n) throw InputError("beckner_expand: need 0 <= l <= n");
    if (l > 20) throw InputError("beckner_expand: interpolation ill-conditioned beyond l = 20");
    const double root = std::sqrt(static_cast<double>(n));
    auto level_value = [&](int j) {
        return phi_block_eval(l, n, BlockCounts{n, j, 0}, 1.0).real();
    };
    auto level_point = [&](int j) { return (2.0 * j - n) / root; };

    std::vector<int> levels(n + 1);
    std::iota(levels.begin(), levels.end(), 0);
    std::stable_sort(levels.begin(), levels.end(),
                     [&](int i, int j) { return std::abs(2 * i - n) < std::abs(2 * j - n); });
    levels.resize(l + 1);

    Eigen::MatrixXd m(l + 1, l + 1);
    Eigen::VectorXd rhs(l + 1);
    for (int r = 0; r <= l; ++r) {
        const double x = level_point(levels[r]);
        for (int c = 0; c <= l; ++c) m(r, c) = hermite_eval(c, Complex(x, 0.0)).real();
        rhs(r) = level_value(levels[r]);
    }
    const Eigen::VectorXd sol = m.fullPivLu().solve(rhs);

    BecknerExpansion out;
    out.coeffs.assign(sol.data(), sol.data() + l + 1);
    for (int j = 0; j <= n; ++j) {
        const double x = level_point(j);
        double fit = 0.0;
        for (int c = 0; c <= l; ++c) fit += out.coeffs[c] * hermite_eval(c, Complex(x, 0.0)).real();
        const double val = level_value(j);
        out.residual = std::max(out.residual, std::abs(fit - val) / std::max(1.0, std::abs(val)));
    }
    return out;
}

CubeFunction SymmetricSpec::materialize() const {
    CubeFunction f = CubeFunction::zero(n);
    std::vector<Complex> level(n + 1, Complex{});
    for (int l = 0; l <= std::min(degree(), n); ++l)
        level[l] = a[l] * factorial(l) / std::pow(static_cast<double>(n), 0.5 * l);
    for (std::size_t s = 0; s < f.coeffs.size(); ++s)
        f.coeffs[s] = level[std::popcount(static_cast<std::uint64_t>(s))];
    return f;
}

Complex SymmetricSpec::eval_tzk(const BlockCounts& counts, Complex z) const {
    const auto phis = phi_block_all(degree(), n, counts, z);
    Complex acc{};
    for (int l = 0; l <= degree(); ++l) acc += a[l] * phis[l];
    return acc;
}

namespace {

// Visits every (a, b) cell of T_z^k f with its value; rows share the block-1
// series, columns the block-2 series.
template <class Visit>
void for_each_cell(const SymmetricSpec& f, Complex z, int k, Visit&& visit) {
    const int n = f.n;
    if (k < 0 || k > n) throw InputError("collapsed backend: k outside 0..n");
    const int top = f.degree();
    const double c = n > 0 ? 1.0 / std::sqrt(static_cast<double>(n)) : 0.0;
    std::vector<std::vector<Complex>> col(n - k + 1);
    for (int b = 0; b <= n - k; ++b) col[b] = pair_series(b, n - k - b, z * c, top);
    std::vector<Complex> weighted(top + 1);
    for (int l = 0; l <= top; ++l) weighted[l] = f.a[l] * factorial(l);
    for (int a = 0; a <= k; ++a) {
        const auto row = pair_series(a, k - a, c, top);
        for (int b = 0; b <= n - k; ++b) {
            Complex acc{};
            for (int r = 0; r <= top; ++r) {
                Complex conv{};
                for (int i = 0; i <= r; ++i) conv += row[i] * col[b][r - i];
                acc += weighted[r] * conv;
            }
            visit(a, b, acc);
        }
    }
}

}  // namespace

CollapsedTable collapse_tzk(const SymmetricSpec& f, Complex z, int k) {
    CollapsedTable t{f.n, k, {}};
    t.values.resize(static_cast<std::size_t>(k + 1) * (f.n - k + 1));
    for_each_cell(f, z, k, [&](int a, int b, Complex v) {
        t.values[static_cast<std::size_t>(a) * (f.n - k + 1) + b] = v;
    });
    return t;
}

double mixed_norm(std::span<const Complex> values, int n, int k, double p, double q) {
    validate_exponents(p, q);
    check_dim(n);
    if (values.size() != (std::size_t{1} << n)) throw InputError("mixed_norm: table length must be 2^n");
    if (k < 0 || k > n) throw InputError("mixed_norm: k outside 0..n");
    const std::size_t outer = std::size_t{1} << k;
    const std::size_t inner = std::size_t{1} << (n - k);
    double total = 0.0;
    for (std::size_t lo = 0; lo < outer; ++lo) {
        double acc = 0.0;
        for (std::size_t hi = 0; hi < inner; ++hi) acc += abs_pow(values[lo | (hi << k)], q);
        total += abs_pow(acc / static_cast<double>(inner), p / q);
    }
    return total / static_cast<double>(outer);
}

double mixed_norm(const CollapsedTable& table, double p, double q) {
    validate_exponents(p, q);
    const int n = table.n;
    const int k = table.k;
    double total = 0.0;
    for (int a = 0; a <= k; ++a) {
        double acc = 0.0;
        for (int b = 0; b <= n - k; ++b)
            acc += std::exp(log_half_binomial(n - k, b)) * abs_pow(table.at(a, b), q);
        total += std::exp(log_half_binomial(k, a)) * abs_pow(acc, p / q);
    }
    return total;
}

double mixed_norm_collapsed(const SymmetricSpec& f, Complex z, int k, double p, double q) {
    validate_exponents(p, q);
    const int n = f.n;
    std::vector<double> wb(n - k + 1);
    for (int b = 0; b <= n - k; ++b) wb[b] = std::exp(log_half_binomial(n - k, b));
    double total = 0.0;
    double row_acc = 0.0;
    for_each_cell(f, z, k, [&](int a, int b, Complex v) {
        row_acc += wb[b] * abs_pow(v, q);
        if (b == n - k) {
            total += std::exp(log_half_binomial(k, a)) * abs_pow(row_acc, p / q);
            row_acc = 0.0;
        }
    });
    return total;
}

}  // namespace hypflow
