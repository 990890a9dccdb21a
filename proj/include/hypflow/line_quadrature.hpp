#pragma once

// Adaptive integration over finite windows of the real line for integrands
// that may have kinks (|P|^r at a real root of P).

#include <functional>
#include <vector>

#include "hypflow/common.hpp"

namespace hypflow {

/// int_lo^hi f(x) dx for f >= 0. Interior local minima of f found on a
/// 2048-cell scan become breakpoints; each piece uses tanh-sinh.
double integrate_nonneg(const std::function<double(double)>& f, double lo, double hi);

/// int_lo^hi f(x) dx by tanh-sinh on the pieces between the given cuts; cuts
/// outside (lo, hi) are ignored. For f whose only rough points are the cuts.
double integrate_split(const std::function<double(double)>& f, double lo, double hi, std::vector<double> cuts);

/// int f(x) exp(-(x-centre)^2 / (2 sd^2)) / (sqrt(2 pi) sd) dx over centre +- reach * sd.
double gaussian_average(const std::function<double(double)>& f, double centre, double sd, double reach);
/// Same with known cuts instead of the breakpoint scan.
double gaussian_average(const std::function<double(double)>& f, double centre, double sd, double reach,
                        std::vector<double> cuts);

/// Half-width, in standard deviations, that holds the mass of a Gaussian
/// times a polynomial of degree `growth`.
double gaussian_reach(double growth);

}  // namespace hypflow
