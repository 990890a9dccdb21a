#pragma once

// Function algebra on the Hamming cube {-1,1}^n.
//
// Conventions:
//   * subset mask S: bit j <-> coordinate j+1, so the last n-k coordinates are
//     the bits at positions >= k;
//   * point index: bit j set <-> x_{j+1} = -1, so W_S(x) = (-1)^popcount(S & x)
//     and a value table is the unnormalized Hadamard transform of the
//     coefficient table.

#include <cstdint>
#include <span>
#include <vector>

#include "hypflow/common.hpp"

namespace hypflow {

inline constexpr int kMaxEnumerationDim = 24;

struct CubeFunction {
    int n = 0;
    std::vector<Complex> coeffs;  // size 2^n, indexed by subset mask

    static CubeFunction zero(int n);
};

/// Coordinates of the point with index `mask` (+1 / -1 per coordinate).
std::vector<int> cube_point(int n, std::uint32_t mask);

Complex walsh_synthesize(const CubeFunction& f, std::span<const int> x);

/// Values at all 2^n points by the Walsh-Hadamard butterfly, O(n 2^n).
std::vector<Complex> walsh_synthesize_all(const CubeFunction& f);

/// Inverse of walsh_synthesize_all. Throws InputError unless the length is 2^n.
CubeFunction walsh_analyze(std::span<const Complex> values);

/// T_z^k: coefficient of S scaled by z^{|S cap {k+1..n}|}.
CubeFunction apply_tzk(const CubeFunction& f, Complex z, int k);

/// phi_l(inputs) = l! e_l(inputs) from the truncated product prod (1 + t x_j).
Complex phi_symmetric(int l, std::span<const Complex> inputs);

/// phi_0 .. phi_L(inputs) in one pass.
std::vector<Complex> phi_symmetric_all(int max_l, std::span<const Complex> inputs);

/// Block occupation of a point: `a` of the first k coordinates and `b` of the
/// last n-k coordinates equal +1.
struct BlockCounts {
    int k = 0;
    int a = 0;
    int b = 0;

    void validate(int n) const;
    /// Probability of the block pattern under the uniform measure.
    double log_weight(int n) const;
    double weight(int n) const;
};

/// phi_l(x_1/sqrt n, .., x_k/sqrt n, z x_{k+1}/sqrt n, .., z x_n/sqrt n) for any
/// x with the given block counts. Cost O(l^2), independent of n.
Complex phi_block_eval(int l, int n, const BlockCounts& counts, Complex z);
std::vector<Complex> phi_block_all(int max_l, int n, const BlockCounts& counts, Complex z);

/// (phi_L(x', z x''), sum_m C(L,m) phi_{L-m}(x') phi_m(x'') z^m), with x' the
/// first k entries of x and x'' the rest.
std::pair<Complex, Complex> binomial_split_check(int l, int k, std::span<const Complex> x, Complex z);

struct BecknerExpansion {
    std::vector<double> coeffs;  // c_0 .. c_l in the Hermite basis of the normalized sum
    double residual = 0.0;       // max relative misfit over every sum level 0..n
};

/// phi_l(x/sqrt n) = sum_m c_m H_m((x_1+..+x_n)/sqrt n) on the cube, by
/// interpolation at the l+1 sum levels closest to zero. Throws InputError for
/// l > n or l > 20.
BecknerExpansion beckner_expand(int n, int l);

/// f_n = sum_l a_l phi_l(x_1/sqrt n, .., x_n/sqrt n); n is unbounded.
struct SymmetricSpec {
    int n = 0;
    std::vector<Complex> a;

    int degree() const { return a.empty() ? 0 : static_cast<int>(a.size()) - 1; }
    /// Walsh table: coefficient a_{|S|} |S|! / n^{|S|/2}. Requires n <= 24.
    CubeFunction materialize() const;
    /// (T_z^k f_n)(x) for any x with the given counts.
    Complex eval_tzk(const BlockCounts& counts, Complex z) const;
};

/// Values of T_z^k f_n on the (a, b) cells, row-major in a.
struct CollapsedTable {
    int n = 0;
    int k = 0;
    std::vector<Complex> values;  // (k+1) * (n-k+1)

    Complex at(int a, int b) const { return values[static_cast<std::size_t>(a) * (n - k + 1) + b]; }
};

CollapsedTable collapse_tzk(const SymmetricSpec& f, Complex z, int k);

/// E^k (E_{n-k} |v|^q)^{p/q} over a full value table (point-index layout).
/// Throws InputError unless 1 <= p <= q and 0 <= k <= n.
double mixed_norm(std::span<const Complex> values, int n, int k, double p, double q);

/// Same quantity with binomial weights over the (a, b) cells.
double mixed_norm(const CollapsedTable& table, double p, double q);

/// Streaming form of mixed_norm(collapse_tzk(f, z, k), p, q); no table is stored.
double mixed_norm_collapsed(const SymmetricSpec& f, Complex z, int k, double p, double q);

void validate_exponents(double p, double q);

}  // namespace hypflow
