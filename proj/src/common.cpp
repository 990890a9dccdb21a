#include "hypflow/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace hypflow {

double abs_pow(Complex v, double r) {
    const double m = std::abs(v);
    if (m == 0.0) return 0.0;
    return std::exp(r * std::log(m));
}

double abs_pow(double v, double r) {
    return abs_pow(Complex(v, 0.0), r);
}

double rel_diff(Complex a, Complex b, double floor) {
    const double scale = std::max({std::abs(a), std::abs(b), floor});
    return std::abs(a - b) / scale;
}

double gaussian_moment(int m) {
    if (m < 0 || (m % 2) != 0) return 0.0;
    double r = 1.0;
    for (int j = m - 1; j > 1; j -= 2) r *= j;
    return r;
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) return -INFINITY;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r < 9e15 ? std::round(r) : r;
}

double factorial(int n) {
    double r = 1.0;
    for (int j = 2; j <= n; ++j) r *= j;
    return r;
}

unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HYPFLOW_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    }
    return hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    // Static interleaved partition; no shared mutable state besides the
    // caller's per-index output slots.
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::uint64_t Rng::next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double Rng::normal() {
    // Box-Muller; one output per call keeps the stream layout simple.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Complex Rng::complex_disk(double radius) {
    const double r = radius * std::sqrt(uniform());
    const double th = 2.0 * kPi * uniform();
    return std::polar(r, th);
}

Rng Rng::split() {
    return Rng(next_u64() ^ 0xD1B54A32D192ED03ULL);
}

}  // namespace hypflow
