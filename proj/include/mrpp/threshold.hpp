#pragma once

// Detail-coefficient selection between levels j0 and J (inclusive) and the
// resulting nonlinear intensity estimate on the 2^(J+1) dyadic cells.
//
// Strategies:
//   DmLocal          hard threshold |beta_hat| > omega sqrt(var_hat); in count
//                    units the rule is |x_l - x_r| > omega sqrt(x_l + x_r).
//   LrtLocal         per-coefficient LRT p-values, kept by a
//                    Benjamini-Hochberg-Yekutieli step-up at level alpha.
//   LrtGlobal        per-level joint LRTs, Holm-Bonferroni across levels;
//                    a whole level is kept or zeroed.
//   LrtIntermediate  per-level recursive pruning: while the joint LRT on the
//                    remaining pairs rejects, remove (and keep) the largest
//                    |mean| coefficient; remaining coefficients are zeroed.
//   Linear           keep everything (no thresholding).
//
// All decision rules operate on pooled counts: both the DM rule and the LRT
// statistics depend on the M realizations only through column sums.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrpp/errors.hpp"
#include "mrpp/haar.hpp"
#include "mrpp/lrt.hpp"

namespace mrpp {

enum class Strategy { Linear, DmLocal, LrtLocal, LrtIntermediate, LrtGlobal };

inline std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Linear: return "linear";
        case Strategy::DmLocal: return "dm_local";
        case Strategy::LrtLocal: return "lrt_local";
        case Strategy::LrtIntermediate: return "lrt_intermediate";
        case Strategy::LrtGlobal: return "lrt_global";
    }
    return "linear";
}

inline Strategy strategy_from_string(const std::string& s) {
    if (s == "linear") return Strategy::Linear;
    if (s == "dm_local") return Strategy::DmLocal;
    if (s == "lrt_local") return Strategy::LrtLocal;
    if (s == "lrt_intermediate") return Strategy::LrtIntermediate;
    if (s == "lrt_global") return Strategy::LrtGlobal;
    throw ConfigError("unknown strategy '" + s + "'");
}

struct ThresholdOptions {
    double alpha = 0.05;
    double omega = 3.0;
    BoundaryPolicy policy = BoundaryPolicy::Conservative;
    // The global strategy as documented zeroes the levels whose
    // no-innovation null is REJECTED.  Setting lrtg_invert keeps exactly
    // those levels instead (zeroing the non-rejected ones).
    bool lrtg_invert = false;
};

// Keep/zero decisions for detail levels j0..J plus a per-coefficient
// diagnostic (p-value for LRT strategies, threshold for the hard rule).
struct ThresholdMask {
    int j0 = 0;
    int J = 0;
    std::vector<std::vector<std::uint8_t>> keep;  // [L - j0][k]
    std::vector<std::vector<double>> diag;        // same shape; NaN if unused

    const std::vector<std::uint8_t>& level(int L) const {
        return keep.at(static_cast<std::size_t>(L - j0));
    }
    std::size_t kept_count() const {
        std::size_t n = 0;
        for (const auto& row : keep)
            for (auto k : row) n += k != 0;
        return n;
    }
    std::size_t total_count() const {
        std::size_t n = 0;
        for (const auto& row : keep) n += row.size();
        return n;
    }
};

// Per-realization detail coefficient estimates at one level: row m holds
// beta_hat^(m)_{L,k}; variance estimates are (2^L / T)(x_l + x_r) per
// realization.
struct CoefficientMatrix {
    int level = 0;
    double horizon = 1.0;
    std::vector<std::vector<double>> beta;      // [m][k]
    std::vector<std::vector<double>> var_hat;   // [m][k]

    std::size_t realizations() const { return beta.size(); }
    std::size_t columns() const { return beta.empty() ? 0 : beta.front().size(); }

    double column_mean(std::size_t k) const {
        double s = 0.0;
        for (const auto& row : beta) s += row.at(k);
        return s / static_cast<double>(beta.size());
    }
    double mean_variance(std::size_t k) const {
        double s = 0.0;
        for (const auto& row : var_hat) s += row.at(k);
        return s / static_cast<double>(var_hat.size());
    }
};

inline CoefficientMatrix coefficient_matrix(std::span<const EventSeries> collection, int L) {
    if (collection.empty()) throw std::domain_error("coefficient_matrix: empty collection");
    CoefficientMatrix out;
    out.level = L;
    out.horizon = collection.front().horizon();
    const double scale = std::pow(2.0, 0.5 * L) / std::sqrt(out.horizon);
    const double var_scale = std::pow(2.0, L) / out.horizon;
    for (const auto& events : collection) {
        const DyadicCounts c = bin_counts(events, L + 1);
        std::vector<double> beta_row(c.counts.size() / 2);
        std::vector<double> var_row(beta_row.size());
        for (std::size_t k = 0; k < beta_row.size(); ++k) {
            const double l = static_cast<double>(c.counts[2 * k]);
            const double r = static_cast<double>(c.counts[2 * k + 1]);
            beta_row[k] = scale * (l - r);
            var_row[k] = var_scale * (l + r);
        }
        out.beta.push_back(std::move(beta_row));
        out.var_hat.push_back(std::move(var_row));
    }
    return out;
}

namespace threshold_detail {

// Pooled counts at levels j0..J+1, the shared input of every strategy.
struct LevelCounts {
    int j0 = 0, J = 0;
    double horizon = 1.0;
    int realizations = 1;
    // counts[i] is the pooled count vector at level j0 + i, i = 0..J+1-j0.
    std::vector<std::vector<std::int64_t>> counts;

    const std::vector<std::int64_t>& at_level(int level) const {
        return counts.at(static_cast<std::size_t>(level - j0));
    }
};

inline LevelCounts build_level_counts(std::span<const EventSeries> collection, int j0, int J) {
    if (j0 < 0 || J < j0) throw std::domain_error("threshold: need 0 <= j0 <= J");
    haar_detail::check_level(J + 1);
    LevelCounts lc;
    lc.j0 = j0;
    lc.J = J;
    DyadicCounts fine = bin_counts(collection, J + 1);
    lc.horizon = fine.horizon;
    lc.realizations = fine.realizations;
    lc.counts.resize(static_cast<std::size_t>(J + 2 - j0));
    lc.counts.back() = fine.counts;
    for (int level = J; level >= j0; --level) {
        const auto& finer = lc.counts[static_cast<std::size_t>(level + 1 - j0)];
        auto& cur = lc.counts[static_cast<std::size_t>(level - j0)];
        cur.resize(finer.size() / 2);
        for (std::size_t k = 0; k < cur.size(); ++k) cur[k] = finer[2 * k] + finer[2 * k + 1];
    }
    return lc;
}

inline ThresholdMask empty_mask(const LevelCounts& lc, bool keep_all) {
    ThresholdMask mask;
    mask.j0 = lc.j0;
    mask.J = lc.J;
    for (int L = lc.j0; L <= lc.J; ++L) {
        const std::size_t n = std::size_t{1} << L;
        mask.keep.emplace_back(n, keep_all ? 1 : 0);
        mask.diag.emplace_back(n, std::numeric_limits<double>::quiet_NaN());
    }
    return mask;
}

} // namespace threshold_detail

// Hard local threshold: keep coefficient (L, k) iff the mean coefficient
// exceeds omega standard errors, i.e. |x_l - x_r| > omega sqrt(x_l + x_r)
// on pooled counts.  The diagnostic holds the coefficient-scale threshold.
inline ThresholdMask dm_local_mask(const threshold_detail::LevelCounts& lc, double omega) {
    if (!(omega > 0.0)) throw std::domain_error("dm_local: omega must be > 0");
    ThresholdMask mask = threshold_detail::empty_mask(lc, false);
    const double M = static_cast<double>(lc.realizations);
    for (int L = lc.j0; L <= lc.J; ++L) {
        const auto& fine = lc.at_level(L + 1);
        auto& keep = mask.keep[static_cast<std::size_t>(L - lc.j0)];
        auto& diag = mask.diag[static_cast<std::size_t>(L - lc.j0)];
        const double var_scale = std::pow(2.0, L) / lc.horizon;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            const std::int64_t l = fine[2 * k], r = fine[2 * k + 1];
            const double d = static_cast<double>(l - r);
            const double s = static_cast<double>(l + r);
            keep[k] = std::fabs(d) > omega * std::sqrt(s) ? 1 : 0;
            // Threshold in coefficient units: omega sqrt(mean var_hat / M).
            diag[k] = omega * std::sqrt(var_scale * s / M) / std::sqrt(M);
        }
    }
    return mask;
}

// Per-coefficient LRT p-values with a Benjamini-Hochberg-Yekutieli step-up
// under arbitrary dependence: with Q tests and alpha_Q = alpha / H_Q,
// keep every coefficient whose p-value is at most p_(i*), where i* is the
// largest index with p_(i) <= (i / Q) alpha_Q.
inline ThresholdMask lrt_local_mask(const threshold_detail::LevelCounts& lc, double alpha) {
    ThresholdMask mask = threshold_detail::empty_mask(lc, false);
    std::vector<double> pvals;
    for (int L = lc.j0; L <= lc.J; ++L) {
        const auto& fine = lc.at_level(L + 1);
        auto& diag = mask.diag[static_cast<std::size_t>(L - lc.j0)];
        for (std::size_t k = 0; k < diag.size(); ++k) {
            const LrtOutcome o = single_coefficient_test(fine[2 * k], fine[2 * k + 1], alpha);
            diag[k] = o.p_value;
            pvals.push_back(o.p_value);
        }
    }
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
    if (cutoff >= 0.0) {
        for (std::size_t row = 0; row < mask.keep.size(); ++row)
            for (std::size_t k = 0; k < mask.keep[row].size(); ++k)
                mask.keep[row][k] = mask.diag[row][k] <= cutoff ? 1 : 0;
    }
    return mask;
}

// Joint no-innovation p-value for one level on pooled counts; a level with
// no events is a clean non-rejection (p = 1).
inline double level_innovation_p(const threshold_detail::LevelCounts& lc, int L, double alpha,
                                 BoundaryPolicy policy) {
    const auto& fine = lc.at_level(L + 1);
    std::int64_t total = 0;
    for (auto c : fine) total += c;
    if (total == 0) return 1.0;
    return lrt_pairwise_sums(fine, alpha, policy).p_value;
}

// Holm-Bonferroni across the Q = J - j0 + 1 level hypotheses: find the
// minimal index i with p_(i) > alpha / (Q + 1 - i); hypotheses before it are
// rejected.  Levels whose null is rejected are zeroed (keep nothing); with
// lrtg_invert the rejected levels are kept instead.
inline ThresholdMask lrt_global_mask(const threshold_detail::LevelCounts& lc, double alpha,
                                     BoundaryPolicy policy, bool invert) {
    ThresholdMask mask = threshold_detail::empty_mask(lc, false);
    const int Q = lc.J - lc.j0 + 1;
    std::vector<std::pair<double, int>> level_ps;  // (p, level)
    for (int L = lc.j0; L <= lc.J; ++L)
        level_ps.emplace_back(level_innovation_p(lc, L, alpha, policy), L);

    std::vector<std::pair<double, int>> sorted = level_ps;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    int reject_upto = Q;  // number of rejected hypotheses in sorted order
    for (int i = 1; i <= Q; ++i) {
        if (sorted[static_cast<std::size_t>(i - 1)].first >
            alpha / static_cast<double>(Q + 1 - i)) {
            reject_upto = i - 1;
            break;
        }
    }
    std::vector<std::uint8_t> rejected(static_cast<std::size_t>(Q), 0);
    for (int i = 0; i < reject_upto; ++i)
        rejected[static_cast<std::size_t>(sorted[static_cast<std::size_t>(i)].second - lc.j0)] = 1;

    for (int L = lc.j0; L <= lc.J; ++L) {
        const std::size_t row = static_cast<std::size_t>(L - lc.j0);
        const bool keep_level = invert ? rejected[row] != 0 : rejected[row] == 0;
        std::fill(mask.keep[row].begin(), mask.keep[row].end(), keep_level ? 1 : 0);
        std::fill(mask.diag[row].begin(), mask.diag[row].end(), level_ps[row].first);
    }
    return mask;
}

// Recursive per-level pruning: reject the joint null on the remaining pairs,
// remove the coefficient with the largest |column mean| (ties: lowest k),
// repeat until acceptance.  Removed coefficients are kept; the rest of the
// level is zeroed.
inline ThresholdMask lrt_intermediate_mask(const threshold_detail::LevelCounts& lc, double alpha,
                                           BoundaryPolicy policy) {
    ThresholdMask mask = threshold_detail::empty_mask(lc, false);
    for (int L = lc.j0; L <= lc.J; ++L) {
        const auto& fine = lc.at_level(L + 1);
        auto& keep = mask.keep[static_cast<std::size_t>(L - lc.j0)];
        const std::size_t pairs = keep.size();

        std::vector<double> term(pairs);
        std::vector<std::int64_t> diff(pairs), mass(pairs);
        double stat = 0.0;
        std::int64_t total = 0;
        int empty = 0;
        for (std::size_t k = 0; k < pairs; ++k) {
            const std::int64_t l = fine[2 * k], r = fine[2 * k + 1];
            term[k] = pair_statistic_term(l, r);
            diff[k] = l - r;
            mass[k] = l + r;
            stat += term[k];
            total += mass[k];
            if (mass[k] == 0) ++empty;
        }
        if (total == 0) continue;  // no events at this level: accept, keep nothing

        std::vector<std::uint8_t> active(pairs, 1);
        std::size_t active_n = pairs;
        int active_empty = empty;
        while (active_n > 0) {
            const int dof = effective_dof(static_cast<int>(active_n), active_empty, policy);
            if (dof < 1) break;
            if (!(stat > chi2_quantile(1.0 - alpha, dof))) break;  // joint null accepted
            std::size_t best = pairs;
            std::int64_t best_abs = -1;
            for (std::size_t k = 0; k < pairs; ++k) {
                if (!active[k]) continue;
                const std::int64_t a = diff[k] < 0 ? -diff[k] : diff[k];
                if (a > best_abs) {
                    best_abs = a;
                    best = k;
                }
            }
            active[best] = 0;
            keep[best] = 1;
            stat -= term[best];
            if (mass[best] == 0) --active_empty;
            --active_n;
        }
    }
    return mask;
}

// Nonlinear estimate: scaling part at level j0 kept unconditionally, detail
// levels j0..J masked by the strategy, reconstructed on the 2^(J+1) cells.
struct NonlinearEstimate {
    Strategy strategy = Strategy::Linear;
    ThresholdOptions options;
    ThresholdMask mask;
    PiecewiseConstantFn fn;
};

inline ThresholdMask make_mask(const threshold_detail::LevelCounts& lc, Strategy strategy,
                               const ThresholdOptions& opt) {
    switch (strategy) {
        case Strategy::Linear: return threshold_detail::empty_mask(lc, true);
        case Strategy::DmLocal: return dm_local_mask(lc, opt.omega);
        case Strategy::LrtLocal: return lrt_local_mask(lc, opt.alpha);
        case Strategy::LrtIntermediate: return lrt_intermediate_mask(lc, opt.alpha, opt.policy);
        case Strategy::LrtGlobal: return lrt_global_mask(lc, opt.alpha, opt.policy, opt.lrtg_invert);
    }
    throw std::domain_error("make_mask: unknown strategy");
}

// Reconstruction from pooled counts with masked detail levels.  Division by
// two is exact in doubles, so the keep-all mask reproduces linear_estimate
// at level J+1 bit for bit.
inline PiecewiseConstantFn reconstruct_masked(const threshold_detail::LevelCounts& lc,
                                              const ThresholdMask& mask) {
    const auto& base = lc.at_level(lc.j0);
    std::vector<double> cur(base.begin(), base.end());
    for (int L = lc.j0; L <= lc.J; ++L) {
        const auto& fine = lc.at_level(L + 1);
        const auto& keep = mask.level(L);
        std::vector<double> next(cur.size() * 2);
        for (std::size_t k = 0; k < cur.size(); ++k) {
            const double d =
                keep[k] ? static_cast<double>(fine[2 * k] - fine[2 * k + 1]) : 0.0;
            next[2 * k] = 0.5 * (cur[k] + d);
            next[2 * k + 1] = 0.5 * (cur[k] - d);
        }
        cur.swap(next);
    }
    const double scale = static_cast<double>(std::int64_t{1} << (lc.J + 1)) /
                         (static_cast<double>(lc.realizations) * lc.horizon);
    for (double& v : cur) v *= scale;
    return PiecewiseConstantFn(lc.J + 1, lc.horizon, std::move(cur));
}

inline NonlinearEstimate estimate_nonlinear(std::span<const EventSeries> collection, int j0, int J,
                                            Strategy strategy, const ThresholdOptions& opt = {}) {
    const auto lc = threshold_detail::build_level_counts(collection, j0, J);
    NonlinearEstimate out;
    out.strategy = strategy;
    out.options = opt;
    out.mask = make_mask(lc, strategy, opt);
    out.fn = reconstruct_masked(lc, out.mask);
    return out;
}

inline NonlinearEstimate estimate_nonlinear(const EventSeries& events, int j0, int J,
                                            Strategy strategy, const ThresholdOptions& opt = {}) {
    return estimate_nonlinear(std::span<const EventSeries>(&events, 1), j0, J, strategy, opt);
}

} // namespace mrpp
