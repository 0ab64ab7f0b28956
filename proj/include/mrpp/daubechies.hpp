#pragma once

// Daubechies-4 analysis on dyadic grids.  The scaling function is evaluated
// by the cascade recursion: exact values at the integers (eigenvector of the
// refinement matrix), then exact dyadic refinement down to spacing 2^-depth,
// with linear interpolation in between.  phi is supported on [0, 3], psi on
// [-1, 2].
//
// Events on [0, T) are rescaled to [0, 3); coefficient estimates are the
// usual stochastic sums alpha_hat = sum_i phi_{J,k}(u_i), beta_hat =
// sum_i psi_{L,k}(u_i) with per-coefficient variance estimates
// sum_i psi^2_{L,k}(u_i).  Only coefficients whose support lies inside
// (0, 3) are eligible for testing; boundary coefficients are estimated,
// flagged, and kept unconditionally in reconstructions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "mrpp/errors.hpp"
#include "mrpp/event_series.hpp"
#include "mrpp/special_functions.hpp"

namespace mrpp {

// Linearly interpolated function on a uniform grid over [lo, hi]; zero
// outside.
class InterpolatedWavelet {
public:
    InterpolatedWavelet() = default;
    InterpolatedWavelet(double lo, double hi, std::vector<double> values)
        : lo_(lo), hi_(hi), values_(std::move(values)) {
        if (values_.size() < 2 || !(hi_ > lo_))
            throw std::domain_error("InterpolatedWavelet: bad grid");
        inv_h_ = static_cast<double>(values_.size() - 1) / (hi_ - lo_);
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& values() const { return values_; }

    double eval(double x) const {
        if (!(x > lo_ && x < hi_)) return 0.0;
        const double u = (x - lo_) * inv_h_;
        auto i = static_cast<std::size_t>(u);
        if (i >= values_.size() - 1) i = values_.size() - 2;
        const double w = u - static_cast<double>(i);
        return values_[i] + w * (values_[i + 1] - values_[i]);
    }

private:
    double lo_ = 0.0, hi_ = 1.0, inv_h_ = 1.0;
    std::vector<double> values_;
};

namespace d4_detail {

// Refinement coefficients c_k with phi(x) = sum_k c_k phi(2x - k).
inline const double kSqrt3 = std::sqrt(3.0);
inline const double kC[4] = {(1.0 + kSqrt3) / 4.0, (3.0 + kSqrt3) / 4.0,
                             (3.0 - kSqrt3) / 4.0, (1.0 - kSqrt3) / 4.0};

struct WaveletPair {
    InterpolatedWavelet phi;  // [0, 3]
    InterpolatedWavelet psi;  // [-1, 2]
};

// Exact dyadic cascade to spacing 2^-depth.
inline WaveletPair build_pair(int depth) {
    if (depth < 1 || depth > 24) throw std::domain_error("d4 cascade: depth out of range");
    const std::size_t n = (std::size_t{3} << depth) + 1;  // grid over [0,3]
    std::vector<double> phi(n, 0.0);
    const auto step0 = std::size_t{1} << depth;  // index distance of 1.0
    // Values at the integers: eigenvector of the refinement matrix,
    // normalized so the partition of unity holds.
    phi[step0] = (1.0 + kSqrt3) / 2.0;
    phi[2 * step0] = (1.0 - kSqrt3) / 2.0;
    // Refine: values at odd multiples of 2^-(s+1) from values at 2^-s.
    for (int s = 0; s < depth; ++s) {
        const std::size_t coarse = std::size_t{1} << (depth - s);      // index step of 2^-s
        const std::size_t half = coarse >> 1;                          // index step of 2^-(s+1)
        for (std::size_t i = half; i < n; i += coarse) {
            // x = i * 2^-depth; phi(x) = sum_k c_k phi(2x - k).
            double v = 0.0;
            for (int k = 0; k < 4; ++k) {
                // 2x - k has grid index 2i - k * step0.
                const std::int64_t j =
                    2 * static_cast<std::int64_t>(i) - static_cast<std::int64_t>(k) * static_cast<std::int64_t>(step0);
                if (j > 0 && j < static_cast<std::int64_t>(n))
                    v += kC[k] * phi[static_cast<std::size_t>(j)];
            }
            phi[i] = v;
        }
    }
    // psi(x) = sum_k d_k phi(2x - k), d_k = (-1)^k c_{1-k}, k = -2..1;
    // support [-1, 2].
    const double d[4] = {kC[3], -kC[2], kC[1], -kC[0]};  // k = -2, -1, 0, 1
    std::vector<double> psi(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -1.0 + static_cast<double>(i) / static_cast<double>(step0);
        double v = 0.0;
        for (int k = -2; k <= 1; ++k) {
            const double arg = 2.0 * x - static_cast<double>(k);
            if (arg <= 0.0 || arg >= 3.0) continue;
            // arg is a multiple of 2^-(depth-1), exactly on the phi grid.
            const double idx = arg * static_cast<double>(step0);
            v += d[k + 2] * phi[static_cast<std::size_t>(std::llround(idx))];
        }
        psi[i] = v;
    }
    WaveletPair out;
    out.phi = InterpolatedWavelet(0.0, 3.0, std::move(phi));
    out.psi = InterpolatedWavelet(-1.0, 2.0, std::move(psi));
    return out;
}

// Shared per-depth cache; cascade cost is paid once per process.
inline const WaveletPair& cascade(int depth) {
    static std::mutex mu;
    static std::vector<std::pair<int, std::shared_ptr<const WaveletPair>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& [d, p] : cache)
        if (d == depth) return *p;
    cache.emplace_back(depth, std::make_shared<WaveletPair>(build_pair(depth)));
    return *cache.back().second;
}

} // namespace d4_detail

inline constexpr int kD4DefaultDepth = 12;

inline const InterpolatedWavelet& d4_phi(int depth = kD4DefaultDepth) {
    return d4_detail::cascade(depth).phi;
}
inline const InterpolatedWavelet& d4_psi(int depth = kD4DefaultDepth) {
    return d4_detail::cascade(depth).psi;
}

// Detail coefficients at one level: k runs over [-1, 3 * 2^L]; interior
// (testable) translates are k in [1, 3 * 2^L - 2].
struct D4Level {
    int level = 0;
    std::vector<double> beta;      // index 0 corresponds to k = -1
    std::vector<double> var_hat;   // same layout

    int k_min() const { return -1; }
    int k_max() const { return 3 * (1 << level); }
    bool interior(int k) const { return k >= 1 && k <= 3 * (1 << level) - 2; }
    double beta_at(int k) const { return beta.at(static_cast<std::size_t>(k + 1)); }
    double var_at(int k) const { return var_hat.at(static_cast<std::size_t>(k + 1)); }
};

struct D4Decomposition {
    int J = 0;
    double horizon = 1.0;
    int depth = kD4DefaultDepth;
    std::vector<double> alpha;     // level J, k = -2 .. 3 * 2^J - 1
    std::vector<D4Level> details;  // levels 0 .. J - 1

    int alpha_k_min() const { return -2; }
    double alpha_at(int k) const { return alpha.at(static_cast<std::size_t>(k + 2)); }
    const D4Level& level(int L) const { return details.at(static_cast<std::size_t>(L)); }
};

namespace d4_detail {

// Accumulates sum of phi_{J,k}(u) over events into coefficients indexed from
// k_offset; per event only the <= 3 overlapping translates contribute.
inline void accumulate_alpha(const std::vector<double>& rescaled, int J,
                             const InterpolatedWavelet& phi, std::vector<double>& alpha,
                             int k_offset) {
    const double scale = std::pow(2.0, 0.5 * J);
    const double pow2J = std::pow(2.0, J);
    const auto k_count = static_cast<std::int64_t>(alpha.size());
    for (double u : rescaled) {
        const double x = pow2J * u;
        const auto base = static_cast<std::int64_t>(std::floor(x));
        for (std::int64_t k = base - 2; k <= base; ++k) {
            const std::int64_t idx = k - k_offset;
            if (idx < 0 || idx >= k_count) continue;
            alpha[static_cast<std::size_t>(idx)] += scale * phi.eval(x - static_cast<double>(k));
        }
    }
}

inline void accumulate_beta(const std::vector<double>& rescaled, int L,
                            const InterpolatedWavelet& psi, D4Level& out) {
    const double scale = std::pow(2.0, 0.5 * L);
    const double pow2L = std::pow(2.0, L);
    const auto k_count = static_cast<std::int64_t>(out.beta.size());
    for (double u : rescaled) {
        const double x = pow2L * u;
        const auto base = static_cast<std::int64_t>(std::floor(x));
        // psi(x - k) is nonzero for x - k in (-1, 2), i.e. k in (x-2, x+1).
        for (std::int64_t k = base - 1; k <= base + 1; ++k) {
            const std::int64_t idx = k + 1;
            if (idx < 0 || idx >= k_count) continue;
            const double v = scale * psi.eval(x - static_cast<double>(k));
            out.beta[static_cast<std::size_t>(idx)] += v;
            out.var_hat[static_cast<std::size_t>(idx)] += v * v;
        }
    }
}

inline std::vector<double> rescale_events(const EventSeries& events) {
    std::vector<double> out;
    out.reserve(events.size());
    const double f = 3.0 / events.horizon();
    for (double t : events.times()) out.push_back(f * t);
    return out;
}

} // namespace d4_detail

inline D4Decomposition d4_decompose(const EventSeries& events, int J,
                                    int depth = kD4DefaultDepth) {
    if (J < 0 || J > 24) throw std::domain_error("d4_decompose: J out of range");
    const auto& pair = d4_detail::cascade(depth);
    D4Decomposition out;
    out.J = J;
    out.horizon = events.horizon();
    out.depth = depth;
    const auto rescaled = d4_detail::rescale_events(events);
    out.alpha.assign(static_cast<std::size_t>(3 * (std::int64_t{1} << J) + 2), 0.0);
    d4_detail::accumulate_alpha(rescaled, J, pair.phi, out.alpha, -2);
    for (int L = 0; L < J; ++L) {
        D4Level lvl;
        lvl.level = L;
        lvl.beta.assign(static_cast<std::size_t>(3 * (std::int64_t{1} << L) + 2), 0.0);
        lvl.var_hat.assign(lvl.beta.size(), 0.0);
        d4_detail::accumulate_beta(rescaled, L, pair.psi, lvl);
        out.details.push_back(std::move(lvl));
    }
    return out;
}

// Two-sided Gaussian coefficient test: reject beta = 0 when |beta_hat| >
// z_{1-alpha/2} sqrt(var_hat).  A coefficient whose support saw no events
// (var_hat = 0) is a clean non-rejection with p = 1.
struct D4CoefficientTest {
    double statistic = 0.0;  // z value
    double p_value = 1.0;
    bool reject = false;
};

inline D4CoefficientTest d4_coefficient_test(double beta_hat, double var_hat, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("d4 test: alpha in (0,1)");
    if (var_hat < 0.0) throw std::domain_error("d4 test: negative variance estimate");
    D4CoefficientTest out;
    if (var_hat == 0.0) {
        out.statistic = 0.0;
        out.p_value = 1.0;
        out.reject = false;
        return out;
    }
    out.statistic = beta_hat / std::sqrt(var_hat);
    out.p_value = 2.0 * normal_sf(std::fabs(out.statistic));
    out.reject = std::fabs(out.statistic) > normal_quantile(1.0 - 0.5 * alpha);
    return out;
}

// Nonlinear D4 estimate: scaling part at j0 plus detail levels j0..J, with
// interior coefficients selected by a Benjamini-Hochberg-Yekutieli step-up
// over the Gaussian-test p-values and boundary coefficients kept as-is.
class D4Estimate {
public:
    D4Estimate(double horizon, int j0, int depth, std::vector<double> alpha,
               std::vector<D4Level> details, std::vector<std::vector<std::uint8_t>> keep)
        : horizon_(horizon), j0_(j0), depth_(depth), alpha_(std::move(alpha)),
          details_(std::move(details)), keep_(std::move(keep)) {}

    int j0() const { return j0_; }
    const std::vector<D4Level>& details() const { return details_; }
    const std::vector<std::vector<std::uint8_t>>& keep() const { return keep_; }

    // Intensity estimate at t in [0, T).
    double eval(double t) const {
        if (!(t >= 0.0 && t < horizon_)) throw std::domain_error("D4Estimate: t outside [0, T)");
        const auto& pair = d4_detail::cascade(depth_);
        const double u = 3.0 * t / horizon_;
        double v = 0.0;
        {
            const double x = std::pow(2.0, j0_) * u;
            const double scale = std::pow(2.0, 0.5 * j0_);
            const auto base = static_cast<std::int64_t>(std::floor(x));
            const auto n = static_cast<std::int64_t>(alpha_.size());
            for (std::int64_t k = base - 2; k <= base; ++k) {
                const std::int64_t idx = k + 2;
                if (idx < 0 || idx >= n) continue;
                v += alpha_[static_cast<std::size_t>(idx)] * scale *
                     pair.phi.eval(x - static_cast<double>(k));
            }
        }
        for (std::size_t li = 0; li < details_.size(); ++li) {
            const D4Level& lvl = details_[li];
            const double x = std::pow(2.0, lvl.level) * u;
            const double scale = std::pow(2.0, 0.5 * lvl.level);
            const auto base = static_cast<std::int64_t>(std::floor(x));
            const auto n = static_cast<std::int64_t>(lvl.beta.size());
            for (std::int64_t k = base - 1; k <= base + 1; ++k) {
                const std::int64_t idx = k + 1;
                if (idx < 0 || idx >= n) continue;
                if (!keep_[li][static_cast<std::size_t>(idx)]) continue;
                v += lvl.beta[static_cast<std::size_t>(idx)] * scale *
                     pair.psi.eval(x - static_cast<double>(k));
            }
        }
        // Undo the [0, T) -> [0, 3) rescaling of the intensity.
        return v * 3.0 / horizon_;
    }

private:
    double horizon_;
    int j0_;
    int depth_;
    std::vector<double> alpha_;          // level j0
    std::vector<D4Level> details_;       // levels j0..J
    std::vector<std::vector<std::uint8_t>> keep_;
};

// Linear D4 estimate: projection onto the scale-J approximation space, no
// detail selection.
inline D4Estimate d4_linear_estimate(const EventSeries& events, int J,
                                     int depth = kD4DefaultDepth) {
    if (J < 0 || J > 24) throw std::domain_error("d4_linear_estimate: J out of range");
    const auto& pair = d4_detail::cascade(depth);
    const auto rescaled = d4_detail::rescale_events(events);
    std::vector<double> alpha_coef(static_cast<std::size_t>(3 * (std::int64_t{1} << J) + 2), 0.0);
    d4_detail::accumulate_alpha(rescaled, J, pair.phi, alpha_coef, -2);
    return D4Estimate(events.horizon(), J, depth, std::move(alpha_coef), {}, {});
}

inline D4Estimate d4_estimate_nonlinear(const EventSeries& events, int j0, int J, double alpha,
                                        int depth = kD4DefaultDepth) {
    if (j0 < 0 || J < j0 || J > 24) throw std::domain_error("d4_estimate_nonlinear: bad levels");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("d4_estimate_nonlinear: alpha in (0,1)");
    const auto& pair = d4_detail::cascade(depth);
    const auto rescaled = d4_detail::rescale_events(events);

    std::vector<double> alpha_coef(static_cast<std::size_t>(3 * (std::int64_t{1} << j0) + 2), 0.0);
    d4_detail::accumulate_alpha(rescaled, j0, pair.phi, alpha_coef, -2);

    std::vector<D4Level> details;
    for (int L = j0; L <= J; ++L) {
        D4Level lvl;
        lvl.level = L;
        lvl.beta.assign(static_cast<std::size_t>(3 * (std::int64_t{1} << L) + 2), 0.0);
        lvl.var_hat.assign(lvl.beta.size(), 0.0);
        d4_detail::accumulate_beta(rescaled, L, pair.psi, lvl);
        details.push_back(std::move(lvl));
    }

    // Gaussian p-values for interior coefficients, then the step-up rule.
    std::vector<double> pvals;
    for (const auto& lvl : details)
        for (int k = lvl.k_min(); k <= lvl.k_max(); ++k)
            if (lvl.interior(k))
                pvals.push_back(d4_coefficient_test(lvl.beta_at(k), lvl.var_at(k), alpha).p_value);
    const std::size_t Q = pvals.size();
    double harmonic = 0.0;
    for (std::size_t i = 1; i <= Q; ++i) harmonic += 1.0 / static_cast<double>(i);
    const double alpha_q = alpha / harmonic;
    std::vector<double> sorted = pvals;
    std::sort(sorted.begin(), sorted.end());
    double cutoff = -1.0;
    for (std::size_t i = Q; i >= 1; --i) {
        if (sorted[i - 1] <= (static_cast<double>(i) / static_cast<double>(Q)) * alpha_q) {
            cutoff = sorted[i - 1];
            break;
        }
    }

    std::vector<std::vector<std::uint8_t>> keep;
    for (const auto& lvl : details) {
        std::vector<std::uint8_t> row(lvl.beta.size(), 1);
        for (int k = lvl.k_min(); k <= lvl.k_max(); ++k) {
            if (!lvl.interior(k)) continue;  // boundary: kept, never tested
            const double p = d4_coefficient_test(lvl.beta_at(k), lvl.var_at(k), alpha).p_value;
            row[static_cast<std::size_t>(k + 1)] = (cutoff >= 0.0 && p <= cutoff) ? 1 : 0;
        }
        keep.push_back(std::move(row));
    }
    return D4Estimate(events.horizon(), j0, depth, std::move(alpha_coef), std::move(details),
                      std::move(keep));
}

} // namespace mrpp
