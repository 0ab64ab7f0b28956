#include <catch_amalgamated.hpp>

#include <cmath>
#include <span>
#include <vector>

#include "mrpp/errors.hpp"
#include "mrpp/event_series.hpp"
#include "mrpp/lrt.hpp"
#include "mrpp/rng.hpp"

using namespace mrpp;

namespace {
using Matrix = std::vector<std::vector<std::int64_t>>;
std::span<const std::vector<std::int64_t>> rows(const Matrix& m) { return {m}; }
}  // namespace

TEST_CASE("equal-means statistic matches hand-frozen values") {
    // Reference values cross-checked against an independent chi-square
    // implementation before being frozen here.
    const std::vector<std::int64_t> s31{3, 1};
    CHECK(equal_means_statistic(s31) == Catch::Approx(1.0464962875290957).epsilon(1e-12));

    const Matrix m{{3, 5}};
    const auto out = lrt_equal_means(rows(m), 1.0, 0.05);
    CHECK(out.statistic == Catch::Approx(0.5053430784314121).epsilon(1e-12));
    CHECK(out.dof == 1);
    CHECK(out.p_value == Catch::Approx(0.4771617808596127).epsilon(1e-9));
    CHECK_FALSE(out.reject);
    CHECK(out.boundary_count == 0);

    const std::vector<std::int64_t> s4{10, 14, 9, 15};
    const auto out4 = lrt_equal_means(std::span<const std::int64_t>(s4), 1.0, 0.05);
    CHECK(out4.statistic == Catch::Approx(2.1858171345783797).epsilon(1e-12));
    CHECK(out4.dof == 3);
    CHECK(out4.p_value == Catch::Approx(0.5347473535336267).epsilon(1e-9));
}

TEST_CASE("equal-means statistic depends only on column sums") {
    // Collapsing the M rows of a count matrix into column totals leaves the
    // statistic unchanged; the per-cell scale delta never enters.
    auto rng = SplitMix64::substream(12, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const int m = 1 + static_cast<int>(rng.uniform01() * 4);
        const int p = 2 + static_cast<int>(rng.uniform01() * 6);
        Matrix mat(static_cast<std::size_t>(m), std::vector<std::int64_t>(static_cast<std::size_t>(p)));
        std::vector<std::int64_t> sums(static_cast<std::size_t>(p), 0);
        std::int64_t total = 0;
        for (auto& row : mat)
            for (std::size_t i = 0; i < row.size(); ++i) {
                row[i] = static_cast<std::int64_t>(rng.uniform01() * 20.0);
                sums[i] += row[i];
                total += row[i];
            }
        if (total == 0) continue;
        const auto full = lrt_equal_means(rows(mat), 0.37, 0.05);
        const auto collapsed =
            lrt_equal_means(std::span<const std::int64_t>(sums), 2.0, 0.05);
        CHECK(full.statistic == Catch::Approx(collapsed.statistic).margin(1e-12));
        CHECK(full.dof == collapsed.dof);
    }
}

TEST_CASE("pairwise statistic and boundary policies") {
    CHECK(pair_statistic_term(4, 0) == Catch::Approx(8.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(pair_statistic_term(0, 0) == 0.0);
    CHECK(pair_statistic_term(5, 5) == 0.0);

    const std::vector<std::int64_t> sums{4, 0};
    const auto out = lrt_pairwise_sums(sums, 0.05, BoundaryPolicy::Conservative);
    CHECK(out.statistic == Catch::Approx(5.545177444479562).epsilon(1e-12));
    CHECK(out.dof == 1);
    CHECK(out.p_value == Catch::Approx(0.018531677751199058).epsilon(1e-9));
    CHECK(out.reject);
    CHECK(out.boundary_count == 0);  // the pair has events, so it is not empty

    CHECK(effective_dof(2, 1, BoundaryPolicy::Conservative) == 2);
    CHECK(effective_dof(2, 1, BoundaryPolicy::MaxLikelihood) == 1);
    CHECK(effective_dof(2, 1, BoundaryPolicy::Intermediate) == 1);
    CHECK(effective_dof(8, 3, BoundaryPolicy::Intermediate) == 6);

    const std::vector<std::int64_t> with_empty{0, 0, 3, 5};
    const auto c = lrt_pairwise_sums(with_empty, 0.05, BoundaryPolicy::Conservative);
    CHECK(c.boundary_count == 1);
    CHECK(c.dof == 2);
    const auto ml = lrt_pairwise_sums(with_empty, 0.05, BoundaryPolicy::MaxLikelihood);
    CHECK(ml.dof == 1);
    CHECK(ml.statistic == Catch::Approx(c.statistic));  // policy only moves the dof
    CHECK(ml.p_value < c.p_value);                      // fewer dof, same R
}

TEST_CASE("degenerate inputs raise the documented errors") {
    const std::vector<std::int64_t> zeros{0, 0, 0, 0};
    CHECK_THROWS_AS(equal_means_statistic(zeros), StatError);
    CHECK_THROWS_AS(lrt_pairwise_sums(zeros, 0.05, BoundaryPolicy::Conservative), StatError);

    const std::vector<std::int64_t> odd{1, 2, 3};
    CHECK_THROWS_AS(lrt_pairwise_sums(odd, 0.05, BoundaryPolicy::Conservative),
                    std::domain_error);
    const std::vector<std::int64_t> single{5};
    CHECK_THROWS_AS(equal_means_statistic(single), std::domain_error);
    const std::vector<std::int64_t> ok{1, 2};
    CHECK_THROWS_AS(lrt_pairwise_sums(ok, 0.0, BoundaryPolicy::Conservative), std::domain_error);
    CHECK_THROWS_AS(lrt_pairwise_sums(ok, 1.0, BoundaryPolicy::Conservative), std::domain_error);

    // With events present at least one pair is live, so even max-likelihood
    // keeps a positive dof.
    const std::vector<std::int64_t> one_live{0, 0, 0, 1};
    CHECK_NOTHROW(lrt_pairwise_sums(one_live, 0.05, BoundaryPolicy::MaxLikelihood));
}

TEST_CASE("homogeneity and innovation wrappers bin events correctly") {
    const EventSeries e({0.1, 0.2, 0.3, 0.6}, 1.0);  // level-1 counts (3, 1)
    const auto hom = test_homogeneity(e, 1, 0.05);
    CHECK(hom.test == "homogeneity");
    CHECK(hom.level == 1);
    CHECK(hom.dof == 1);
    CHECK(hom.statistic == Catch::Approx(1.0464962875290957).epsilon(1e-12));

    CHECK_THROWS_AS(test_homogeneity(e, 0, 0.05), std::domain_error);

    const auto innov = test_innovation(e, 0, 0.05);
    CHECK(innov.test == "innovation");
    CHECK(innov.level == 0);
    CHECK(innov.dof == 1);
    // Level-0 innovation compares the two level-1 cells, so the statistic
    // coincides with the two-cell homogeneity statistic.
    CHECK(innov.statistic == Catch::Approx(hom.statistic).epsilon(1e-12));

    const EventSeries empty({}, 1.0);
    CHECK_THROWS_AS(test_homogeneity(empty, 1, 0.05), StatError);
}

TEST_CASE("single-coefficient test never throws on empty pairs") {
    const auto z = single_coefficient_test(0, 0, 0.05);
    CHECK(z.statistic == 0.0);
    CHECK(z.p_value == 1.0);
    CHECK(z.boundary_count == 1);
    CHECK_FALSE(z.reject);

    const auto big = single_coefficient_test(40, 2, 0.05);
    CHECK(big.reject);
    CHECK(big.p_value < 1e-6);
    CHECK(big.boundary_count == 0);
}

TEST_CASE("outcome serializes all fields") {
    const std::vector<std::int64_t> sums{4, 0};
    const auto out = lrt_pairwise_sums(sums, 0.05, BoundaryPolicy::Intermediate);
    const auto j = out.to_json();
    CHECK(j.at("test").get<std::string>() == "pairwise");
    CHECK(j.at("statistic").get<double>() == Catch::Approx(out.statistic));
    CHECK(j.at("dof").get<int>() == out.dof);
    CHECK(j.at("p_value").get<double>() == Catch::Approx(out.p_value));
    CHECK(j.at("reject").get<bool>() == out.reject);
    CHECK(j.at("policy").get<std::string>() == "intermediate");
}
