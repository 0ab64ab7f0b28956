#include <catch_amalgamated.hpp>

#include <cmath>

#include "mrpp/models.hpp"
#include "mrpp/quadrature.hpp"

using namespace mrpp;

TEST_CASE("smooth integrands integrate to analytic values") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          Catch::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0) ==
          Catch::Approx(9.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 50.0) ==
          Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kinks are handled through breakpoints") {
    auto f = [](double x) { return std::fabs(x - 0.5); };
    CHECK(integrate(f, 0.0, 1.0, {0.5}) == Catch::Approx(0.25).epsilon(1e-13));
    // Jump discontinuity at a supplied breakpoint.
    auto g = [](double x) { return x < 0.25 ? 1.0 : 3.0; };
    CHECK(integrate(g, 0.0, 1.0, {0.25}) == Catch::Approx(0.25 + 3.0 * 0.75).epsilon(1e-13));
}

TEST_CASE("closed-form model integrals agree with quadrature") {
    const auto tri = IntensityModel::triangular(1000.0, 0.3, 2, 1.0);
    const auto ts = IntensityModel::triangle_sine(1000.0, 0.1, 0, 4, 0.2, 0.7, 1.0);
    const auto blk = IntensityModel::blocks(10000.0);
    const auto bmp = IntensityModel::bumps(10000.0);
    for (const auto& model : {tri, ts, blk, bmp}) {
        for (auto [a, b] : {std::pair{0.0, 1.0}, {0.13, 0.87}, {0.4, 0.41}}) {
            const double direct = model.integrate(a, b);
            const double quad =
                integrate([&](double t) { return model.eval(t); }, a, b, model.breakpoints());
            CHECK(direct == Catch::Approx(quad).epsilon(1e-8));
        }
    }
}
