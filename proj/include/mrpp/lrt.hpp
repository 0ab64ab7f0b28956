#pragma once

// Likelihood ratio tests for scaled-Poisson cell counts.
//
// Equal-means test over P cells: with column sums Y_i and mean Ybar,
//   R = 2 sum_i Y_i log(Y_i / Ybar),
// asymptotically chi-square with P - 1 dof.  The statistic depends on the
// data only through the column sums, so M realizations collapse to one row,
// and it does not depend on the cell scale delta.
//
// Pairwise equality test over P disjoint pairs (Y_l, Y_r):
//   R = 2 sum_pairs [ Y_l log(2 Y_l / S) + Y_r log(2 Y_r / S) ],  S = Y_l + Y_r,
// asymptotically chi-square.  Pairs with S = 0 contribute zero; the dof
// charged for them is a policy choice (see BoundaryPolicy).
//
// Everything uses the convention 0 log 0 = 0.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrpp/errors.hpp"
#include "mrpp/event_series.hpp"
#include "mrpp/haar.hpp"
#include "mrpp/special_functions.hpp"

namespace mrpp {

using json = nlohmann::json;

// Degrees-of-freedom accounting for all-zero pairs in the pairwise test.
// Conservative charges full dof (P); MaxLikelihood drops one per empty pair
// (P - U); Intermediate splits the difference (P - ceil(U/2)).
enum class BoundaryPolicy { Conservative, MaxLikelihood, Intermediate };

inline std::string to_string(BoundaryPolicy p) {
    switch (p) {
        case BoundaryPolicy::Conservative: return "conservative";
        case BoundaryPolicy::MaxLikelihood: return "max_likelihood";
        case BoundaryPolicy::Intermediate: return "intermediate";
    }
    return "conservative";
}

inline BoundaryPolicy boundary_policy_from_string(const std::string& s) {
    if (s == "conservative") return BoundaryPolicy::Conservative;
    if (s == "max_likelihood") return BoundaryPolicy::MaxLikelihood;
    if (s == "intermediate") return BoundaryPolicy::Intermediate;
    throw ConfigError("unknown boundary policy '" + s + "'");
}

struct LrtOutcome {
    std::string test;        // "equal_means", "homogeneity", "pairwise", "innovation", ...
    int level = -1;          // dyadic level where applicable, else -1
    double statistic = 0.0;  // R
    int dof = 0;
    double p_value = 1.0;
    bool reject = false;
    double alpha = 0.05;
    int boundary_count = 0;  // all-zero pairs (pairwise) or all-zero cells (equal-means)
    BoundaryPolicy policy = BoundaryPolicy::Conservative;

    json to_json() const {
        return json{{"test", test},           {"level", level},
                    {"statistic", statistic}, {"dof", dof},
                    {"p_value", p_value},     {"reject", reject},
                    {"alpha", alpha},         {"boundary_count", boundary_count},
                    {"policy", to_string(policy)}};
    }
};

namespace lrt_detail {

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

inline void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("lrt: alpha must be in (0,1)");
}

// Column sums of an M x P count matrix; a single row passes through.
inline std::vector<std::int64_t> column_sums(std::span<const std::vector<std::int64_t>> rows) {
    if (rows.empty()) throw std::domain_error("lrt: empty count matrix");
    std::vector<std::int64_t> sums(rows.front().size(), 0);
    for (const auto& row : rows) {
        if (row.size() != sums.size()) throw std::domain_error("lrt: ragged count matrix");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] < 0) throw std::domain_error("lrt: negative count");
            sums[i] += row[i];
        }
    }
    return sums;
}

} // namespace lrt_detail

// Equal-means statistic from column sums: R = 2 sum Y_i log(Y_i / Ybar).
inline double equal_means_statistic(std::span<const std::int64_t> sums) {
    if (sums.size() < 2) throw std::domain_error("equal_means: need at least 2 cells");
    double total = 0.0;
    for (auto y : sums) {
        if (y < 0) throw std::domain_error("equal_means: negative count");
        total += static_cast<double>(y);
    }
    if (total == 0.0) throw StatError("equal_means: all cells are zero");
    const double mean = total / static_cast<double>(sums.size());
    double r = 0.0;
    for (auto y : sums)
        if (y > 0) r += static_cast<double>(y) * std::log(static_cast<double>(y) / mean);
    return 2.0 * r;
}

// Equal scaled-Poisson means across P cells from an M x P count matrix.
// delta (the cell scale) does not enter the statistic; it is accepted so
// call sites can carry it alongside the counts.
inline LrtOutcome lrt_equal_means(std::span<const std::vector<std::int64_t>> counts,
                                  double delta, double alpha) {
    (void)delta;
    lrt_detail::check_alpha(alpha);
    const auto sums = lrt_detail::column_sums(counts);
    LrtOutcome out;
    out.test = "equal_means";
    out.alpha = alpha;
    out.statistic = equal_means_statistic(sums);
    out.dof = static_cast<int>(sums.size()) - 1;
    for (auto y : sums)
        if (y == 0) ++out.boundary_count;
    out.p_value = chi2_sf(out.statistic, out.dof);
    out.reject = out.statistic > chi2_quantile(1.0 - alpha, out.dof);
    return out;
}

inline LrtOutcome lrt_equal_means(std::span<const std::int64_t> sums, double delta, double alpha) {
    std::vector<std::vector<std::int64_t>> one_row{
        std::vector<std::int64_t>(sums.begin(), sums.end())};
    return lrt_equal_means(std::span<const std::vector<std::int64_t>>(one_row), delta, alpha);
}

// J-th level homogeneity: equal means across the 2^J dyadic cells.
inline LrtOutcome test_homogeneity(std::span<const EventSeries> collection, int J, double alpha) {
    if (J < 1) throw std::domain_error("test_homogeneity: J must be >= 1 (J = 0 is vacuous)");
    lrt_detail::check_alpha(alpha);
    const DyadicCounts pooled = bin_counts(collection, J);
    if (pooled.total() == 0) throw StatError("test_homogeneity: no events");
    LrtOutcome out;
    out.test = "homogeneity";
    out.level = J;
    out.alpha = alpha;
    out.statistic = equal_means_statistic(pooled.counts);
    out.dof = static_cast<int>(pooled.counts.size()) - 1;
    for (auto y : pooled.counts)
        if (y == 0) ++out.boundary_count;
    out.p_value = chi2_sf(out.statistic, out.dof);
    out.reject = out.statistic > chi2_quantile(1.0 - alpha, out.dof);
    return out;
}

inline LrtOutcome test_homogeneity(const EventSeries& events, int J, double alpha) {
    return test_homogeneity(std::span<const EventSeries>(&events, 1), J, alpha);
}

// Contribution of one pair to the pairwise statistic (count scale).
inline double pair_statistic_term(std::int64_t left, std::int64_t right) {
    if (left < 0 || right < 0) throw std::domain_error("pairwise: negative count");
    const double s = static_cast<double>(left + right);
    if (s == 0.0) return 0.0;
    double r = 0.0;
    if (left > 0) r += static_cast<double>(left) * std::log(2.0 * static_cast<double>(left) / s);
    if (right > 0) r += static_cast<double>(right) * std::log(2.0 * static_cast<double>(right) / s);
    return 2.0 * r;
}

inline int effective_dof(int pairs, int empty_pairs, BoundaryPolicy policy) {
    switch (policy) {
        case BoundaryPolicy::Conservative: return pairs;
        case BoundaryPolicy::MaxLikelihood: return pairs - empty_pairs;
        case BoundaryPolicy::Intermediate: return pairs - (empty_pairs + 1) / 2;
    }
    return pairs;
}

// Pairwise equality across P disjoint pairs given pooled column sums
// (length 2P, pair i occupies columns 2i and 2i+1).
inline LrtOutcome lrt_pairwise_sums(std::span<const std::int64_t> sums, double alpha,
                                    BoundaryPolicy policy) {
    lrt_detail::check_alpha(alpha);
    if (sums.size() < 2 || sums.size() % 2 != 0)
        throw std::domain_error("pairwise: need an even number of columns");
    const int pairs = static_cast<int>(sums.size() / 2);
    double r = 0.0;
    int empty = 0;
    std::int64_t total = 0;
    for (int i = 0; i < pairs; ++i) {
        const std::int64_t l = sums[2 * i], g = sums[2 * i + 1];
        total += l + g;
        if (l + g == 0) ++empty;
        r += pair_statistic_term(l, g);
    }
    if (total == 0) throw StatError("pairwise: all cells are zero");
    LrtOutcome out;
    out.test = "pairwise";
    out.alpha = alpha;
    out.statistic = r;
    out.boundary_count = empty;
    out.policy = policy;
    out.dof = effective_dof(pairs, empty, policy);
    if (out.dof < 1) throw StatError("pairwise: no degrees of freedom left");
    out.p_value = chi2_sf(out.statistic, out.dof);
    out.reject = out.statistic > chi2_quantile(1.0 - alpha, out.dof);
    return out;
}

inline LrtOutcome lrt_pairwise(std::span<const std::vector<std::int64_t>> counts, double alpha,
                               BoundaryPolicy policy = BoundaryPolicy::Conservative) {
    const auto sums = lrt_detail::column_sums(counts);
    return lrt_pairwise_sums(sums, alpha, policy);
}

// L-th level innovation: all detail coefficients at level L vanish iff the
// 2^L pairs of level-(L+1) cells have equal means.
inline LrtOutcome test_innovation(std::span<const EventSeries> collection, int L, double alpha,
                                  BoundaryPolicy policy = BoundaryPolicy::Conservative) {
    if (L < 0) throw std::domain_error("test_innovation: L must be >= 0");
    const DyadicCounts pooled = bin_counts(collection, L + 1);
    LrtOutcome out = lrt_pairwise_sums(pooled.counts, alpha, policy);
    out.test = "innovation";
    out.level = L;
    return out;
}

inline LrtOutcome test_innovation(const EventSeries& events, int L, double alpha,
                                  BoundaryPolicy policy = BoundaryPolicy::Conservative) {
    return test_innovation(std::span<const EventSeries>(&events, 1), L, alpha, policy);
}

// Single-coefficient innovation test on one pair of cell counts.  Unlike the
// joint tests, an all-zero pair is defined as a clean non-rejection (R = 0,
// p = 1) so per-coefficient thresholding never fails on empty cells.
inline LrtOutcome single_coefficient_test(std::int64_t left, std::int64_t right, double alpha) {
    lrt_detail::check_alpha(alpha);
    LrtOutcome out;
    out.test = "single_coefficient";
    out.alpha = alpha;
    out.dof = 1;
    out.boundary_count = (left + right == 0) ? 1 : 0;
    out.statistic = pair_statistic_term(left, right);
    out.p_value = chi2_sf(out.statistic, 1);
    out.reject = out.statistic > chi2_quantile(1.0 - alpha, 1);
    return out;
}

} // namespace mrpp
