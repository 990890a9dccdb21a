#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypflow {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Error taxonomy. Every failure in the library is one of these.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvaluatorMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// |v|^r computed as exp(r log|v|), with |0|^r := 0.
double abs_pow(Complex v, double r);
double abs_pow(double v, double r);

/// Relative difference |a-b| / max(|a|, |b|, floor).
double rel_diff(Complex a, Complex b, double floor = 1e-300);

/// Double factorial (m-1)!! of the Gaussian moment E x^m for even m; 0 for odd m.
double gaussian_moment(int m);

double binomial(int n, int k);
double log_binomial(int n, int k);
double factorial(int n);

/// Number of worker threads, capped by HYPFLOW_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads.
/// Each index is executed exactly once; the caller writes results by index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// SplitMix64: the single PRNG used for all randomness. split() derives an
/// independent stream by hashing the next output, so reruns with one seed are
/// bit-identical regardless of how streams are consumed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    double normal();
    Complex complex_disk(double radius);    // uniform in the closed disk
    Rng split();

private:
    std::uint64_t state_;
};

}  // namespace hypflow
