#include "hypflow/line_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>

namespace hypflow {

namespace {

constexpr double kPieceTol = 1e-11;

double tanh_sinh_piece(const std::function<double(double)>& f, double a, double b) {
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(f, a, b, kPieceTol);
}

std::function<double(double)> weighted(const std::function<double(double)>& f, double centre, double sd) {
    const double norm = 1.0 / (std::sqrt(2.0 * kPi) * sd);
    return [&f, centre, sd, norm](double x) {
        const double y = (x - centre) / sd;
        return f(x) * std::exp(-0.5 * y * y) * norm;
    };
}

}  // namespace

double integrate_nonneg(const std::function<double(double)>& f, double lo, double hi) {
    constexpr int kScan = 2048;
    constexpr std::size_t kMaxCuts = 256;
    if (!(hi > lo)) return 0.0;
    const double h = (hi - lo) / kScan;
    std::vector<double> val(kScan + 1);
    for (int i = 0; i <= kScan; ++i) val[i] = f(lo + i * h);
    if (*std::max_element(val.begin(), val.end()) <= 0.0) return 0.0;

    std::vector<double> cuts{lo};
    const int bits = std::numeric_limits<double>::digits / 2;
    for (int i = 1; i < kScan && cuts.size() < kMaxCuts; ++i) {
        if (val[i] < val[i - 1] && val[i] <= val[i + 1]) {
            const auto m = boost::math::tools::brent_find_minima(f, lo + (i - 1) * h, lo + (i + 1) * h, bits);
            if (m.first > cuts.back() + 1e-9 * (hi - lo) && m.first < hi - 1e-9 * (hi - lo)) cuts.push_back(m.first);
        }
    }
    cuts.push_back(hi);

    double total = 0.0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        if (!(cuts[j + 1] > cuts[j])) continue;
        total += tanh_sinh_piece(f, cuts[j], cuts[j + 1]);
    }
    return total;
}

double integrate_split(const std::function<double(double)>& f, double lo, double hi, std::vector<double> cuts) {
    if (!(hi > lo)) return 0.0;
    const double margin = 1e-9 * (hi - lo);
    std::vector<double> edges{lo};
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts)
        if (c > edges.back() + margin && c < hi - margin) edges.push_back(c);
    edges.push_back(hi);
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < edges.size(); ++j) total += tanh_sinh_piece(f, edges[j], edges[j + 1]);
    return total;
}

double gaussian_average(const std::function<double(double)>& f, double centre, double sd, double reach) {
    if (!(sd > 0.0)) throw DomainError("gaussian_average: sd must be positive");
    return integrate_nonneg(weighted(f, centre, sd), centre - reach * sd, centre + reach * sd);
}

double gaussian_average(const std::function<double(double)>& f, double centre, double sd, double reach,
                        std::vector<double> cuts) {
    if (!(sd > 0.0)) throw DomainError("gaussian_average: sd must be positive");
    return integrate_split(weighted(f, centre, sd), centre - reach * sd, centre + reach * sd, std::move(cuts));
}

double gaussian_reach(double growth) { return 14.0 + 2.0 * std::sqrt(std::max(0.0, growth)); }

}  // namespace hypflow
