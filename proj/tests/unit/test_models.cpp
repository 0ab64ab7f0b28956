#include <catch_amalgamated.hpp>

#include <cmath>

#include "mrpp/models.hpp"

using namespace mrpp;

TEST_CASE("triangular intensity endpoints and integral") {
    // lambda0=1000, xi=0.1, V=1: 4 segments, lambda(0) = 1000 (2 - 0.1)/2 = 950,
    // rising to 1050 at the end of each even segment, falling back over the
    // odd one.
    const auto m = IntensityModel::triangular(1000.0, 0.1, 1, 1.0);
    CHECK(m.eval(0.0) == Catch::Approx(950.0));
    CHECK(m.eval(0.125) == Catch::Approx(1000.0));  // halfway up the ramp
    CHECK(m.eval(0.25) == Catch::Approx(1050.0));   // peak at the segment break
    CHECK(m.eval(0.5) == Catch::Approx(950.0));     // trough again
    CHECK(m.total_mass() == Catch::Approx(1000.0).epsilon(1e-12));
    CHECK(m.lambda_max() == Catch::Approx(1050.0));
    CHECK_THROWS_AS(IntensityModel::triangular(1000.0, 2.5, 1, 1.0), std::domain_error);
    CHECK_THROWS_AS(IntensityModel::triangular(-5.0, 0.1, 1, 1.0), std::domain_error);
}

TEST_CASE("triangular projections are homogeneous up to level V+1") {
    const auto m = IntensityModel::triangular(1000.0, 0.1, 1, 1.0);
    for (int J : {1, 2}) {
        for (double v : true_haar_projection(m, J)) CHECK(v == Catch::Approx(1000.0));
    }
    // Level 3 halves each ramp: cell means follow the up-up-down-down wave
    // 975, 1025, 1025, 975 per period.
    const auto p3 = true_haar_projection(m, 3);
    REQUIRE(p3.size() == 8);
    for (std::size_t k = 0; k < 8; ++k) {
        const bool low = k % 4 == 0 || k % 4 == 3;
        CHECK(p3[k] == Catch::Approx(low ? 975.0 : 1025.0));
    }
}

TEST_CASE("triangle-sine enforces separation and keeps the triangular mass") {
    CHECK_THROWS_AS(IntensityModel::triangle_sine(1000.0, 0.1, 1, 3, 0.05), std::domain_error);
    CHECK_NOTHROW(IntensityModel::triangle_sine(1000.0, 0.1, 1, 4, 0.05));
    CHECK_NOTHROW(IntensityModel::triangle_sine(1000.0, 0.1, 0, 3, 0.05));
    // Amplitude must keep the intensity nonnegative.
    CHECK_THROWS_AS(IntensityModel::triangle_sine(1000.0, 0.1, 0, 3, 0.96), std::domain_error);

    const auto m = IntensityModel::triangle_sine(1000.0, 0.1, 0, 3, 0.05, 0.0, 1.0);
    CHECK(m.total_mass() == Catch::Approx(1000.0).epsilon(1e-12));
    // Sine rides on the tent: at t=0 the sine vanishes with phase 0.
    CHECK(m.eval(0.0) == Catch::Approx(950.0));
}

TEST_CASE("blocks and bumps normalize to total mass 2 A0") {
    const auto blk = IntensityModel::blocks(10000.0);
    const auto bmp = IntensityModel::bumps(10000.0);
    CHECK(blk.total_mass() == Catch::Approx(20000.0).epsilon(1e-9));
    CHECK(bmp.total_mass() == Catch::Approx(20000.0).epsilon(1e-9));
    // Intensities stay positive and below the advertised bound.
    for (int i = 0; i < 1000; ++i) {
        const double t = (i + 0.5) / 1000.0;
        CHECK(blk.eval(t) > 0.0);
        CHECK(bmp.eval(t) > 0.0);
        CHECK(blk.eval(t) <= blk.lambda_max());
        CHECK(bmp.eval(t) <= bmp.lambda_max());
    }
}

TEST_CASE("triangle-sine benchmark composition") {
    const auto m = IntensityModel::tsine_bench(10000.0, 0.1, 1, 3, 0.45, 0.0);
    CHECK(m.total_mass() == Catch::Approx(20000.0).epsilon(1e-9));
    CHECK(m.horizon() == 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = (i + 0.5) / 1000.0;
        CHECK(m.eval(t) > 0.0);
        CHECK(m.eval(t) <= m.lambda_max());
    }
}

TEST_CASE("piecewise linear integrates by trapezoid") {
    const auto m = IntensityModel::piecewise_linear({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    CHECK(m.total_mass() == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(m.eval(0.5) == Catch::Approx(1.0));
    CHECK(m.integrate(0.5, 1.5) == Catch::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("model json round trip and validation") {
    const auto m = IntensityModel::from_json(
        json{{"kind", "triangular"}, {"lambda0", 1000.0}, {"xi", 0.1}, {"V", 1}});
    CHECK(m.kind() == "triangular");
    CHECK(m.eval(0.0) == Catch::Approx(950.0));

    CHECK_THROWS_AS(IntensityModel::from_json(json{{"kind", "nope"}}), ConfigError);
    CHECK_THROWS_AS(IntensityModel::from_json(json{{"kind", "triangular"}}), ConfigError);
    CHECK_THROWS_AS(
        IntensityModel::from_json(json{{"kind", "blocks"}, {"A0", 1.0}, {"T", 2.0}}),
        ConfigError);

    const auto ts = IntensityModel::from_json(json{{"kind", "tsine_bench"}, {"A0", 10000.0}});
    CHECK(ts.total_mass() == Catch::Approx(20000.0).epsilon(1e-9));
}

TEST_CASE("true coefficients vanish where the model is smooth at scale") {
    const auto flat = IntensityModel::constant(500.0, 1.0);
    const auto coef = true_coefficients(flat, 2, 5);
    for (double a : coef.alpha) CHECK(a == Catch::Approx(500.0 * std::pow(2.0, -1.0)));
    for (const auto& level : coef.beta)
        for (double b : level) CHECK(b == Catch::Approx(0.0).margin(1e-9));

    // Triangular V=1: detail levels 0 and 1 vanish, level 2 does not.
    const auto tri = IntensityModel::triangular(1000.0, 0.1, 1, 1.0);
    const auto tc = true_coefficients(tri, 0, 3);
    REQUIRE(tc.beta.size() == 3);
    for (double b : tc.beta[0]) CHECK(b == Catch::Approx(0.0).margin(1e-9));
    for (double b : tc.beta[1]) CHECK(b == Catch::Approx(0.0).margin(1e-9));
    double level2 = 0.0;
    for (double b : tc.beta[2]) level2 += std::fabs(b);
    CHECK(level2 > 1.0);
}
