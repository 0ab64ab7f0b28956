#pragma once

// Adaptive Gauss-Kronrod 15(7) integration.  Panels are seeded at caller
// supplied breakpoints (model kinks and jumps) and subdivided until the
// Kronrod-Gauss discrepancy meets the tolerance.

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace mrpp {

namespace detail {

// QUADPACK dqk15 nodes and weights (positive half; node 7 is the origin).
inline constexpr double kKronrodNodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double kGaussWeights[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct PanelResult {
    double kronrod;
    double error;
};

template <typename F>
PanelResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double kron = kKronrodWeights[7] * fc;
    double gauss = kGaussWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double x = h * kKronrodNodes[i];
        double f1 = f(c - x);
        double f2 = f(c + x);
        kron += kKronrodWeights[i] * (f1 + f2);
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
    }
    kron *= h;
    gauss *= h;
    return {kron, std::fabs(kron - gauss)};
}

} // namespace detail

// Integrates f over [a, b] to the given relative tolerance.  breakpoints
// lying inside (a, b) become initial panel boundaries, so discontinuities
// never sit inside a panel.
template <typename F>
double integrate(const F& f, double a, double b, const std::vector<double>& breakpoints = {},
                 double rel_tol = 1e-10, int max_panels = 20000) {
    if (!(b >= a)) throw std::domain_error("integrate: b must be >= a");
    if (a == b) return 0.0;

    std::vector<double> edges{a};
    std::vector<double> sorted(breakpoints);
    std::sort(sorted.begin(), sorted.end());
    for (double x : sorted)
        if (x > a && x < b && x != edges.back()) edges.push_back(x);
    edges.push_back(b);

    struct Panel {
        double a, b, value, error;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    std::priority_queue<Panel> queue;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto r = detail::gk15(f, edges[i], edges[i + 1]);
        queue.push({edges[i], edges[i + 1], r.kronrod, r.error});
        total += r.kronrod;
        total_err += r.error;
    }

    int panels = static_cast<int>(queue.size());
    while (total_err > rel_tol * std::max(std::fabs(total), 1e-300) && panels < max_panels) {
        Panel worst = queue.top();
        queue.pop();
        if (worst.b - worst.a < 1e-15 * std::max(std::fabs(worst.a), 1.0)) {
            // Panel no longer splittable at double precision; accept it.
            queue.push({worst.a, worst.b, worst.value, 0.0});
            total_err -= worst.error;
            continue;
        }
        double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        total += left.kronrod + right.kronrod - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push({worst.a, mid, left.kronrod, left.error});
        queue.push({mid, worst.b, right.kronrod, right.error});
        ++panels;
    }
    return total;
}

} // namespace mrpp
