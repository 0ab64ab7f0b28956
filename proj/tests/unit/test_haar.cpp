#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mrpp/event_series.hpp"
#include "mrpp/haar.hpp"
#include "mrpp/models.hpp"
#include "mrpp/rng.hpp"
#include "mrpp/simulate.hpp"

using namespace mrpp;

namespace {
EventSeries toy() { return EventSeries({0.1, 0.2, 0.3, 0.6}, 1.0); }
}  // namespace

TEST_CASE("dyadic bin counts land in the right cells") {
    const auto e = toy();
    const auto c1 = bin_counts(e, 1);
    REQUIRE(c1.counts == std::vector<std::int64_t>{3, 1});
    const auto c2 = bin_counts(e, 2);
    REQUIRE(c2.counts == std::vector<std::int64_t>{2, 1, 1, 0});
    CHECK(c2.total() == 4);

    const auto down = aggregate(c2, 1);
    CHECK(down.counts == c1.counts);
    CHECK_THROWS_AS(aggregate(c1, 2), std::domain_error);

    const std::vector<EventSeries> both{e, e};
    const auto pooled = bin_counts(std::span<const EventSeries>(both), 1);
    CHECK(pooled.realizations == 2);
    CHECK(pooled.counts == std::vector<std::int64_t>{6, 2});
}

TEST_CASE("piecewise-constant estimates scale counts by 2^J/(M T)") {
    const auto fn = linear_estimate(toy(), 1);
    REQUIRE(fn.values() == std::vector<double>{6.0, 2.0});
    CHECK(fn.evaluate(0.0) == 6.0);
    CHECK(fn.evaluate(0.49) == 6.0);
    CHECK(fn.evaluate(0.5) == 2.0);
    CHECK_THROWS_AS(fn.evaluate(1.0), std::domain_error);
    CHECK_THROWS_AS(fn.evaluate(-0.1), std::domain_error);

    // Pooling two identical copies leaves the estimate unchanged: the
    // scale divides by the number of realizations.
    const std::vector<EventSeries> both{toy(), toy()};
    const auto fn2 = linear_estimate(std::span<const EventSeries>(both), 1);
    CHECK(fn2.values() == std::vector<double>{6.0, 2.0});
}

TEST_CASE("small decomposition has hand-computable coefficients") {
    const auto d = decompose(toy(), 0, 2);
    REQUIRE(d.j0() == 0);
    REQUIRE(d.J() == 2);
    CHECK(d.alpha_counts() == std::vector<std::int64_t>{4});
    CHECK(d.alpha_hat(0) == 4.0);
    CHECK(d.detail_counts(0) == std::vector<std::int64_t>{2});
    CHECK(d.beta_hat(0, 0) == 2.0);
    CHECK(d.detail_counts(1) == (std::vector<std::int64_t>{1, 1}));
    CHECK(d.beta_hat(1, 0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(d.beta_hats(1)[1] == Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("unmasked reconstruction reproduces the bin-count estimate bitwise") {
    const auto model = IntensityModel::triangular(3000.0, 0.3, 1, 1.0);
    const auto series = sample_many(model, 2, 11);
    const std::span<const EventSeries> sp(series);
    const auto d = decompose(sp, 2, 6);
    const auto direct = linear_estimate(sp, 6);
    const auto rec = d.reconstruct();
    REQUIRE(rec.values().size() == direct.values().size());
    for (std::size_t k = 0; k < rec.values().size(); ++k)
        CHECK(rec.values()[k] == direct.values()[k]);  // exact, not approximate
}

TEST_CASE("coarse coefficients refine exactly from finer counts") {
    // Decomposing from level J+2 must give bit-identical alpha/beta at the
    // levels shared with a decomposition from level J.
    const auto model = IntensityModel::blocks(800.0);
    const auto series = sample_many(model, 3, 5);
    const std::span<const EventSeries> sp(series);
    const auto coarse = decompose(sp, 1, 4);
    const auto fine = decompose(sp, 1, 6);
    for (std::size_t k = 0; k < coarse.alpha_counts().size(); ++k)
        CHECK(coarse.alpha_hat(k) == fine.alpha_hat(k));
    for (int j = 1; j < 4; ++j)
        for (std::size_t k = 0; k < coarse.detail_counts(j).size(); ++k)
            CHECK(coarse.beta_hat(j, k) == fine.beta_hat(j, k));
}

TEST_CASE("refinement stays exact for non-unit horizons and pooled data") {
    auto rng = SplitMix64::substream(77, 0);
    std::vector<double> times;
    for (double t = rng.uniform01() * 0.01;; t += 0.002 + 0.03 * rng.uniform01()) {
        if (t >= 2.5) break;
        times.push_back(t);
    }
    const EventSeries e(times, 2.5);
    const auto coarse = decompose(e, 0, 3);
    const auto fine = decompose(e, 0, 5);
    for (int j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < coarse.detail_counts(j).size(); ++k)
            CHECK(coarse.beta_hat(j, k) == fine.beta_hat(j, k));
    CHECK(coarse.alpha_hat(0) == fine.alpha_hat(0));
}

TEST_CASE("energy is conserved between scale and detail coefficients") {
    const auto model = IntensityModel::bumps(600.0);
    const auto series = sample_many(model, 1, 21);
    const auto& e = series[0];
    const int j0 = 1, J = 7;
    const auto d = decompose(e, j0, J);
    const auto flat = decompose(e, J, J);  // alpha at level J, no details
    double lhs = 0.0;
    for (double a : flat.alpha_hats()) lhs += a * a;
    double rhs = 0.0;
    for (double a : d.alpha_hats()) rhs += a * a;
    for (int j = j0; j < J; ++j)
        for (double b : d.beta_hats(j)) rhs += b * b;
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("level bounds are validated") {
    const auto e = toy();
    CHECK_THROWS_AS(bin_counts(e, -1), std::domain_error);
    CHECK_THROWS_AS(bin_counts(e, 27), std::domain_error);
    CHECK_THROWS_AS(decompose(e, 3, 2), std::domain_error);
    const std::vector<EventSeries> none;
    CHECK_THROWS_AS(bin_counts(std::span<const EventSeries>(none), 2), std::domain_error);
    const std::vector<EventSeries> mixed{EventSeries({0.1}, 1.0), EventSeries({0.1}, 2.0)};
    CHECK_THROWS_AS(bin_counts(std::span<const EventSeries>(mixed), 1), std::domain_error);
}
