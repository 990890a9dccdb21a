#include "hypflow/two_point.hpp"

#include <algorithm>
#include <cmath>

namespace hypflow {

ExponentTriple::ExponentTriple(double p_, double q_, Complex z_) : p(p_), q(q_), z(z_) {
    if (!(p >= 1.0) || !(q >= p) || !std::isfinite(q))
        throw InputError("ExponentTriple: need 1 <= p <= q < inf");
    if (!(std::abs(z) <= 1.0 + 1e-12)) throw InputError("ExponentTriple: need |z| <= 1");
}

namespace {

double power_mean(Complex u, Complex v, double r) {
    return std::pow(0.5 * (abs_pow(u, r) + abs_pow(v, r)), 1.0 / r);
}

struct Candidate {
    double ratio;
    Complex b;
};

bool better(const Candidate& c, const Candidate& best) {
    if (c.ratio > best.ratio + 1e-15) return true;
    return std::abs(c.ratio - best.ratio) <= 1e-15 && std::abs(c.b) < std::abs(best.b);
}

}  // namespace

MarginRecord two_point_margin(Complex a, Complex b, const ExponentTriple& t) {
    MarginRecord r;
    r.a = a;
    r.b = b;
    r.lhs = power_mean(a + t.z * b, a - t.z * b, t.q);
    r.rhs = power_mean(a + b, a - b, t.p);
    r.margin = r.rhs - r.lhs;
    return r;
}

MarginRecord infinitesimal_margin(Complex w, const ExponentTriple& t) {
    MarginRecord r;
    r.w = w;
    const Complex wz = w * t.z;
    r.lhs = (t.q - 2.0) * wz.real() * wz.real() + std::norm(wz);
    r.rhs = (t.p - 2.0) * w.real() * w.real() + std::norm(w);
    r.margin = r.rhs - r.lhs;
    return r;
}

AngleScan infinitesimal_scan(const ExponentTriple& t, int angles) {
    AngleScan s;
    s.min_margin = INFINITY;
    for (int i = 0; i < angles; ++i) {
        const double th = 2.0 * kPi * i / angles;
        const double m = infinitesimal_margin(std::polar(1.0, th), t).margin;
        if (m < s.min_margin) {
            s.min_margin = m;
            s.worst_theta = th;
        }
    }
    return s;
}

double two_point_ratio(Complex b, const ExponentTriple& t) {
    const Complex one{1.0, 0.0};
    return power_mean(one + t.z * b, one - t.z * b, t.q) / power_mean(one + b, one - b, t.p);
}

SearchBudget scan_budget() {
    SearchBudget b;
    b.radius = 4.0;
    b.step = 0.2;
    b.refine_seeds = 4;
    b.max_evals = 200'000;
    return b;
}

ExtremalResult extremal_ratio(const ExponentTriple& t, const SearchBudget& budget) {
    ExtremalResult out;
    long evals = 0;
    auto eval = [&](Complex b) {
        ++evals;
        return Candidate{two_point_ratio(b, t), b};
    };

    // Keep the refine_seeds best grid points as starting points.
    std::vector<Candidate> seeds;
    auto offer_seed = [&](const Candidate& c) {
        seeds.push_back(c);
        std::sort(seeds.begin(), seeds.end(), [](const Candidate& x, const Candidate& y) { return better(x, y); });
        if (static_cast<int>(seeds.size()) > budget.refine_seeds) seeds.pop_back();
    };

    const int half = static_cast<int>(std::floor(budget.radius / budget.step + 1e-9));
    bool grid_done = true;
    for (int i = -half; i <= half && grid_done; ++i) {
        for (int j = -half; j <= half; ++j) {
            const Complex b(i * budget.step, j * budget.step);
            if (std::abs(b) > budget.radius + 1e-12) continue;
            if (evals >= budget.max_evals) {
                grid_done = false;
                break;
            }
            const Candidate c = eval(b);
            offer_seed(c);
        }
    }
    out.partial = !grid_done;

    // Second-order seeds along the worst infinitesimal direction catch
    // failures that live only near b = 0.
    const AngleScan scan = infinitesimal_scan(t);
    if (scan.min_margin < 0.0)
        for (double r : {1e-3, 1e-2, 3e-2, 0.1, 0.3}) offer_seed(eval(std::polar(r, scan.worst_theta)));

    Candidate best{-1.0, Complex{}};
    for (const Candidate& seed : seeds) {
        Candidate cur = seed;
        double step = budget.step;
        while (step >= budget.refine_tol && evals < budget.max_evals) {
            bool moved = false;
            for (int d = 0; d < 8; ++d) {
                const Candidate c = eval(cur.b + std::polar(step, d * kPi / 4.0));
                if (std::abs(c.b) <= budget.radius && better(c, cur)) {
                    cur = c;
                    moved = true;
                }
            }
            if (!moved) step *= 0.5;
        }
        if (better(cur, best)) best = cur;
    }
    out.sup_ratio = best.ratio;
    out.a = Complex{1.0, 0.0};
    out.b = best.b;
    // a = 0: lhs/rhs = |z| exactly, for every b != 0.
    if (std::abs(t.z) > best.ratio + 1e-15) {
        out.sup_ratio = std::abs(t.z);
        out.a = Complex{};
        out.b = Complex{1.0, 0.0};
    }
    out.evals = evals;
    return out;
}

namespace {

RegionCell scan_cell(const ExponentTriple& t, const SearchBudget& budget) {
    RegionCell cell;
    cell.z = t.z;
    const AngleScan scan = infinitesimal_scan(t);
    cell.infinitesimal_margin_min = scan.min_margin;
    cell.infinitesimal_holds = scan.min_margin >= -kInfinitesimalTol;
    const ExtremalResult r = extremal_ratio(t, budget);
    cell.sup_ratio = r.sup_ratio;
    cell.witness_b = r.b;
    cell.global_holds = holds(r);
    return cell;
}

}  // namespace

std::vector<RegionCell> region_scan(double p, double q, double step, const SearchBudget& budget) {
    if (!(step >= 0.01)) throw InputError("region_scan: grid resolution must be >= 0.01");
    ExponentTriple(p, q, 0.0);  // validates p, q
    const int half = static_cast<int>(std::floor(1.0 / step + 1e-9));
    std::vector<Complex> zs;
    for (int i = -half; i <= half; ++i)
        for (int j = -half; j <= half; ++j) {
            const Complex z(i * step, j * step);
            if (std::abs(z) <= 1.0 + 1e-12) zs.push_back(z);
        }
    std::vector<RegionCell> cells(zs.size());
    parallel_for(zs.size(), [&](std::size_t i) {
        const Complex z = std::abs(zs[i]) > 1.0 ? zs[i] / std::abs(zs[i]) : zs[i];
        cells[i] = scan_cell(ExponentTriple(p, q, z), budget);
    });
    return cells;
}

std::vector<RegionCell> real_axis_scan(double p, double q, double step, const SearchBudget& budget) {
    if (!(step >= 0.01)) throw InputError("real_axis_scan: grid resolution must be >= 0.01");
    const int count = static_cast<int>(std::floor(1.0 / step + 1e-9)) + 1;
    std::vector<RegionCell> cells(count);
    parallel_for(count, [&](std::size_t i) {
        cells[i] = scan_cell(ExponentTriple(p, q, std::min(1.0, i * step)), budget);
    });
    return cells;
}

double real_failure_threshold(double p, double q, double step, double tol, const SearchBudget& budget) {
    const auto cells = real_axis_scan(p, q, step, budget);
    double lo = 0.0;
    double hi = -1.0;
    for (const auto& c : cells) {
        if (c.global_holds) {
            lo = c.z.real();
        } else {
            hi = c.z.real();
            break;
        }
    }
    if (hi < 0.0) return 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (holds(extremal_ratio(ExponentTriple(p, q, mid), budget)))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace hypflow
