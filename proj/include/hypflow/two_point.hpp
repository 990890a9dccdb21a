#pragma once

// The two-point inequality
//   ((|a+zb|^q + |a-zb|^q)/2)^{1/q} <= ((|a+b|^p + |a-b|^p)/2)^{1/p}
// and its second-order form at b -> 0, with a search for the worst ratio.

#include <vector>

#include "hypflow/common.hpp"

namespace hypflow {

/// 1 <= p <= q < inf and |z| <= 1 + 1e-12, checked on construction.
struct ExponentTriple {
    double p = 2.0;
    double q = 2.0;
    Complex z{1.0, 0.0};

    ExponentTriple() = default;
    ExponentTriple(double p_, double q_, Complex z_);
};

struct MarginRecord {
    Complex a{};
    Complex b{};
    Complex w{};
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
};

MarginRecord two_point_margin(Complex a, Complex b, const ExponentTriple& t);

/// margin = (p-2)(Re w)^2 + |w|^2 - (q-2)(Re wz)^2 - |wz|^2.
MarginRecord infinitesimal_margin(Complex w, const ExponentTriple& t);

struct AngleScan {
    double min_margin = 0.0;
    double worst_theta = 0.0;
};

/// Minimum of infinitesimal_margin(e^{i theta}) over `angles` equispaced theta.
AngleScan infinitesimal_scan(const ExponentTriple& t, int angles = 256);

/// lhs/rhs with a = 1; the ratio is invariant under (a, b) -> (lambda a, lambda b).
double two_point_ratio(Complex b, const ExponentTriple& t);

struct SearchBudget {
    double radius = 8.0;
    double step = 0.05;
    double refine_tol = 1e-6;
    int refine_seeds = 8;
    long max_evals = 4'000'000;
};

/// Reduced budget for region scans.
SearchBudget scan_budget();

struct ExtremalResult {
    double sup_ratio = 1.0;
    Complex a{1.0, 0.0};
    Complex b{};
    bool partial = false;  // evaluation budget ran out before the grid completed
    long evals = 0;
};

/// Tolerance on the ratio for declaring the inequality to hold at a parameter.
inline constexpr double kHoldTol = 1e-9;

/// Maximizes lhs/rhs over (a, b); a = 0 is closed form (ratio |z|), a = 1 by a
/// square grid on |b| <= radius followed by compass refinement.
/// Ties go to the smallest |b|.
ExtremalResult extremal_ratio(const ExponentTriple& t, const SearchBudget& budget = {});

inline bool holds(const ExtremalResult& r) { return r.sup_ratio <= 1.0 + kHoldTol; }

struct RegionCell {
    Complex z{};
    bool global_holds = true;
    bool infinitesimal_holds = true;
    double infinitesimal_margin_min = 0.0;
    double sup_ratio = 1.0;
    Complex witness_b{};
};

/// Threshold below which the infinitesimal scan is declared to fail.
inline constexpr double kInfinitesimalTol = 1e-7;

/// Scans z = step * (i, j) over the closed unit disk. Requires step >= 0.01.
std::vector<RegionCell> region_scan(double p, double q, double step, const SearchBudget& budget = scan_budget());

/// Scans z on the nonnegative real segment [0, 1] with the given step.
std::vector<RegionCell> real_axis_scan(double p, double q, double step, const SearchBudget& budget = {});

/// Smallest real z in [0, 1] at which the global inequality fails, located by a
/// step scan then bisection to `tol`. Returns 1.0 if no failure is found.
double real_failure_threshold(double p, double q, double step = 0.01, double tol = 1e-4,
                              const SearchBudget& budget = {});

}  // namespace hypflow
