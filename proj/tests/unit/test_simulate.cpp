#include <catch_amalgamated.hpp>

#include <cmath>

#include "mrpp/models.hpp"
#include "mrpp/rng.hpp"
#include "mrpp/simulate.hpp"

using namespace mrpp;

TEST_CASE("sampling is deterministic under a fixed seed") {
    const auto model = IntensityModel::triangular(2000.0, 0.4, 1, 1.0);
    const auto a = sample_many(model, 3, 99);
    const auto b = sample_many(model, 3, 99);
    REQUIRE(a.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(a[size_t(i)].digest() == b[size_t(i)].digest());
    // Substreams differ between realizations and seeds.
    CHECK(a[0].digest() != a[1].digest());
    CHECK(sample_many(model, 1, 100)[0].digest() != a[0].digest());
}

TEST_CASE("event counts match the total mass") {
    const auto models = {IntensityModel::constant(1000.0, 1.0),
                         IntensityModel::triangular(1000.0, 0.5, 2, 1.0),
                         IntensityModel::tsine_bench(500.0, 0.1, 1, 3, 0.45, 0.0)};
    for (const auto& model : models) {
        const int n = 200;
        const auto series = sample_many(model, n, 4242);
        double events = 0.0;
        for (const auto& e : series) {
            events += static_cast<double>(e.size());
            for (double t : e.times()) {
                REQUIRE(t >= 0.0);
                REQUIRE(t < model.horizon());
            }
        }
        const double mean = events / n;
        const double mass = model.total_mass();
        // Poisson: sd of the mean count is sqrt(mass / n).
        CHECK(std::fabs(mean - mass) < 4.0 * std::sqrt(mass / n));
    }
}

TEST_CASE("thinning respects the intensity shape") {
    // Full-height two-segment wave peaking at t = 1/2: the middle half of
    // the window carries 0.625 of the total mass.
    const auto model = IntensityModel::triangular(5000.0, 1.0, 0, 1.0);
    CHECK(model.integrate(0.25, 0.75) / model.total_mass() == Catch::Approx(0.625).epsilon(1e-12));
    auto rng = SplitMix64::substream(7, 0);
    std::size_t mid = 0, edge = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const auto e = sample(model, rng);
        for (double t : e.times()) {
            if (t >= 0.25 && t < 0.75) ++mid;
            else ++edge;
        }
    }
    CHECK(mid > edge);
    const double frac = static_cast<double>(mid) / static_cast<double>(mid + edge);
    CHECK(frac == Catch::Approx(0.625).margin(0.02));
}

TEST_CASE("empty horizon stays empty") {
    const auto model = IntensityModel::constant(1e-9, 1.0);
    auto rng = SplitMix64::substream(3, 1);
    const auto e = sample(model, rng);
    CHECK(e.size() <= 1);
}
