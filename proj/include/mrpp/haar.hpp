#pragma once

// Haar analysis of dyadic event counts.  All transforms run on integer
// counts (sums and differences stay exact); the 2^(j/2)/sqrt(T) coefficient
// scaling and the 1/M averaging are applied only when a scaled value is
// read.  Consequences: refinement identities hold exactly, and inverting a
// full decomposition reproduces the binned estimator bit for bit.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mrpp/errors.hpp"
#include "mrpp/event_series.hpp"

namespace mrpp {

namespace haar_detail {

inline void check_level(int level) {
    if (level < 0 || level > 26) throw std::domain_error("haar: level out of range [0, 26]");
}

} // namespace haar_detail

// Event counts on the 2^level dyadic cells of [0, T), pooled over M
// realizations.
struct DyadicCounts {
    int level = 0;
    double horizon = 1.0;
    int realizations = 1;
    std::vector<std::int64_t> counts;

    std::int64_t total() const {
        std::int64_t s = 0;
        for (auto c : counts) s += c;
        return s;
    }
};

inline void accumulate_counts(const EventSeries& events,
                              std::vector<std::int64_t>& counts) {
    const auto n = static_cast<std::int64_t>(counts.size());
    const double scale = static_cast<double>(n) / events.horizon();
    for (double t : events.times()) {
        auto k = static_cast<std::int64_t>(t * scale);
        if (k >= n) k = n - 1;  // t just below T can round up at double precision
        if (k < 0) k = 0;
        ++counts[static_cast<std::size_t>(k)];
    }
}

inline DyadicCounts bin_counts(const EventSeries& events, int level) {
    haar_detail::check_level(level);
    DyadicCounts out;
    out.level = level;
    out.horizon = events.horizon();
    out.realizations = 1;
    out.counts.assign(std::size_t{1} << level, 0);
    accumulate_counts(events, out.counts);
    return out;
}

inline DyadicCounts bin_counts(std::span<const EventSeries> collection, int level) {
    haar_detail::check_level(level);
    if (collection.empty()) throw std::domain_error("bin_counts: empty collection");
    DyadicCounts out;
    out.level = level;
    out.horizon = collection.front().horizon();
    out.realizations = static_cast<int>(collection.size());
    out.counts.assign(std::size_t{1} << level, 0);
    for (const auto& events : collection) {
        if (events.horizon() != out.horizon)
            throw std::domain_error("bin_counts: mixed horizons in collection");
        accumulate_counts(events, out.counts);
    }
    return out;
}

// Sums adjacent cells down to a coarser level.
inline DyadicCounts aggregate(const DyadicCounts& fine, int level) {
    haar_detail::check_level(level);
    if (level > fine.level) throw std::domain_error("aggregate: target level finer than input");
    DyadicCounts out;
    out.level = level;
    out.horizon = fine.horizon;
    out.realizations = fine.realizations;
    out.counts.assign(std::size_t{1} << level, 0);
    const int shift = fine.level - level;
    for (std::size_t k = 0; k < fine.counts.size(); ++k) out.counts[k >> shift] += fine.counts[k];
    return out;
}

// Piecewise-constant function on the 2^level dyadic cells of [0, T).
class PiecewiseConstantFn {
public:
    PiecewiseConstantFn() = default;
    PiecewiseConstantFn(int level, double horizon, std::vector<double> values)
        : level_(level), horizon_(horizon), values_(std::move(values)) {
        haar_detail::check_level(level);
        if (values_.size() != (std::size_t{1} << level))
            throw std::domain_error("PiecewiseConstantFn: wrong number of values");
    }

    int level() const { return level_; }
    double horizon() const { return horizon_; }
    const std::vector<double>& values() const { return values_; }

    // Right-open cells: t must lie in [0, T).
    double evaluate(double t) const {
        if (!(t >= 0.0 && t < horizon_))
            throw std::domain_error("PiecewiseConstantFn: t outside [0, T)");
        auto n = static_cast<std::int64_t>(values_.size());
        auto k = static_cast<std::int64_t>(t * static_cast<double>(n) / horizon_);
        if (k >= n) k = n - 1;
        return values_[static_cast<std::size_t>(k)];
    }

private:
    int level_ = 0;
    double horizon_ = 1.0;
    std::vector<double> values_;
};

// Linear (unthresholded) intensity estimate at a given level: cell k carries
// 2^level / (M T) times the pooled count.
inline PiecewiseConstantFn linear_estimate(const DyadicCounts& counts) {
    const double scale = static_cast<double>(std::int64_t{1} << counts.level) /
                         (static_cast<double>(counts.realizations) * counts.horizon);
    std::vector<double> values(counts.counts.size());
    for (std::size_t k = 0; k < values.size(); ++k)
        values[k] = scale * static_cast<double>(counts.counts[k]);
    return PiecewiseConstantFn(counts.level, counts.horizon, std::move(values));
}

inline PiecewiseConstantFn linear_estimate(const EventSeries& events, int level) {
    return linear_estimate(bin_counts(events, level));
}

inline PiecewiseConstantFn linear_estimate(std::span<const EventSeries> collection, int level) {
    return linear_estimate(bin_counts(collection, level));
}

// Haar decomposition of pooled counts between levels j0 and J.  Stores the
// integer scaling counts at j0 and the integer pair differences per detail
// level; scaled coefficient estimates are derived on demand:
//   alpha_hat(k)   = 2^(j0/2)/sqrt(T) x^{j0}_k / M
//   beta_hat(j, k) = 2^(j/2)/sqrt(T) (x^{j+1}_{2k} - x^{j+1}_{2k+1}) / M
class HaarDecomposition {
public:
    HaarDecomposition() = default;

    HaarDecomposition(const DyadicCounts& fine, int j0)
        : j0_(j0), J_(fine.level), horizon_(fine.horizon), realizations_(fine.realizations) {
        haar_detail::check_level(j0);
        if (j0 > fine.level) throw std::domain_error("HaarDecomposition: need j0 <= J");
        std::vector<std::int64_t> cur = fine.counts;
        details_.resize(static_cast<std::size_t>(J_ - j0_));
        for (int j = J_ - 1; j >= j0_; --j) {
            std::vector<std::int64_t> next(std::size_t{1} << j);
            std::vector<std::int64_t>& diff = details_[static_cast<std::size_t>(j - j0_)];
            diff.resize(next.size());
            for (std::size_t k = 0; k < next.size(); ++k) {
                next[k] = cur[2 * k] + cur[2 * k + 1];
                diff[k] = cur[2 * k] - cur[2 * k + 1];
            }
            cur.swap(next);
        }
        alpha_counts_ = std::move(cur);
    }

    int j0() const { return j0_; }
    int J() const { return J_; }
    double horizon() const { return horizon_; }
    int realizations() const { return realizations_; }

    const std::vector<std::int64_t>& alpha_counts() const { return alpha_counts_; }
    const std::vector<std::int64_t>& detail_counts(int j) const {
        return details_.at(static_cast<std::size_t>(j - j0_));
    }

    double alpha_hat(std::size_t k) const {
        return level_scale(j0_) * static_cast<double>(alpha_counts_.at(k));
    }
    double beta_hat(int j, std::size_t k) const {
        return level_scale(j) * static_cast<double>(detail_counts(j).at(k));
    }

    std::vector<double> alpha_hats() const {
        std::vector<double> out(alpha_counts_.size());
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = alpha_hat(k);
        return out;
    }
    std::vector<double> beta_hats(int j) const {
        const auto& d = detail_counts(j);
        std::vector<double> out(d.size());
        const double s = level_scale(j);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = s * static_cast<double>(d[k]);
        return out;
    }

    // Inverse transform back to cell values at level J.  Runs on the stored
    // integers, so with no masking this equals linear_estimate exactly.
    PiecewiseConstantFn reconstruct() const {
        std::vector<double> cur(alpha_counts_.begin(), alpha_counts_.end());
        for (int j = j0_; j < J_; ++j) {
            const auto& diff = detail_counts(j);
            std::vector<double> next(cur.size() * 2);
            for (std::size_t k = 0; k < cur.size(); ++k) {
                next[2 * k] = 0.5 * (cur[k] + static_cast<double>(diff[k]));
                next[2 * k + 1] = 0.5 * (cur[k] - static_cast<double>(diff[k]));
            }
            cur.swap(next);
        }
        const double scale = static_cast<double>(std::int64_t{1} << J_) /
                             (static_cast<double>(realizations_) * horizon_);
        for (double& v : cur) v *= scale;
        return PiecewiseConstantFn(J_, horizon_, std::move(cur));
    }

private:
    double level_scale(int j) const {
        return std::pow(2.0, 0.5 * j) / std::sqrt(horizon_) / static_cast<double>(realizations_);
    }

    int j0_ = 0, J_ = 0;
    double horizon_ = 1.0;
    int realizations_ = 1;
    std::vector<std::int64_t> alpha_counts_;          // level j0
    std::vector<std::vector<std::int64_t>> details_;  // levels j0..J-1
};

inline HaarDecomposition decompose(const EventSeries& events, int j0, int J) {
    return HaarDecomposition(bin_counts(events, J), j0);
}

inline HaarDecomposition decompose(std::span<const EventSeries> collection, int j0, int J) {
    return HaarDecomposition(bin_counts(collection, J), j0);
}

} // namespace mrpp
