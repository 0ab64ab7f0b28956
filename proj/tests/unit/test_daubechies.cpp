#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mrpp/daubechies.hpp"
#include "mrpp/event_series.hpp"
#include "mrpp/models.hpp"
#include "mrpp/simulate.hpp"

using namespace mrpp;

namespace {

// Trapezoid rule over an interpolated wavelet's own grid.
double grid_integral(const InterpolatedWavelet& w, double (*f)(double, double)) {
    const auto& v = w.values();
    const double h = (w.hi() - w.lo()) / static_cast<double>(v.size() - 1);
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = w.lo() + h * static_cast<double>(i);
        const double weight = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
        s += weight * f(x, v[i]);
    }
    return s * h;
}

}  // namespace

TEST_CASE("piecewise-linear table evaluates and vanishes off support") {
    const InterpolatedWavelet w(0.0, 1.0, {0.0, 1.0});
    CHECK(w.eval(0.5) == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(w.eval(0.25) == Catch::Approx(0.25).epsilon(1e-15));
    CHECK(w.eval(-0.1) == 0.0);
    CHECK(w.eval(1.1) == 0.0);
    CHECK(w.eval(0.0) == 0.0);  // support is the open interval
    CHECK_THROWS_AS(InterpolatedWavelet(0.0, 1.0, {1.0}), std::domain_error);
    CHECK_THROWS_AS(InterpolatedWavelet(1.0, 0.0, {0.0, 1.0}), std::domain_error);
}

TEST_CASE("refined scaling function has the defining integrals") {
    const auto& phi = d4_phi();
    const auto& psi = d4_psi();
    CHECK(phi.lo() == 0.0);
    CHECK(phi.hi() == 3.0);
    CHECK(psi.lo() == -1.0);
    CHECK(psi.hi() == 2.0);

    // The refinement rule preserves the discrete means exactly, so the
    // trapezoid sums reproduce integral 1 (phi) and 0 (psi) to roundoff.
    CHECK(grid_integral(phi, [](double, double v) { return v; }) ==
          Catch::Approx(1.0).margin(1e-9));
    CHECK(grid_integral(psi, [](double, double v) { return v; }) ==
          Catch::Approx(0.0).margin(1e-9));
    // First moment of psi vanishes as well (two vanishing moments).
    CHECK(grid_integral(psi, [](double x, double v) { return x * v; }) ==
          Catch::Approx(0.0).margin(1e-5));
    // Orthonormality holds only in the refinement limit; the tabulated
    // version gets close.
    CHECK(grid_integral(phi, [](double, double v) { return v * v; }) ==
          Catch::Approx(1.0).margin(0.01));
    CHECK(grid_integral(psi, [](double, double v) { return v * v; }) ==
          Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("integer translates of the scaling function sum to one") {
    const auto& phi = d4_phi();
    for (double x : {0.3, 1.0, 1.37, 2.6, 5.81, -0.4}) {
        double s = 0.0;
        for (int k = -10; k <= 10; ++k) s += phi.eval(x - static_cast<double>(k));
        CHECK(s == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("cascade depth is validated and cached") {
    CHECK_THROWS_AS(d4_phi(0), std::domain_error);
    CHECK_THROWS_AS(d4_phi(25), std::domain_error);
    const auto& a = d4_phi(6);
    const auto& b = d4_phi(6);
    CHECK(&a == &b);  // same cached table
    CHECK(a.values().size() == std::size_t{3} * (std::size_t{1} << 6) + 1);
}

TEST_CASE("gaussian coefficient test freezes its reference values") {
    const auto t = d4_coefficient_test(10.0, 4.0, 0.05);
    CHECK(t.statistic == Catch::Approx(5.0).epsilon(1e-14));
    CHECK(t.p_value == Catch::Approx(5.733031437583866e-07).epsilon(1e-9));
    CHECK(t.reject);

    const auto none = d4_coefficient_test(3.0, 0.0, 0.05);
    CHECK(none.p_value == 1.0);
    CHECK_FALSE(none.reject);

    const auto borderline = d4_coefficient_test(1.9, 1.0, 0.05);
    CHECK_FALSE(borderline.reject);  // |z| = 1.9 < 1.96

    CHECK_THROWS_AS(d4_coefficient_test(1.0, -0.5, 0.05), std::domain_error);
    CHECK_THROWS_AS(d4_coefficient_test(1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("decomposition matches direct translate sums") {
    const EventSeries e({0.1, 0.5, 0.72}, 1.0);
    const int J = 3;
    const auto d = d4_decompose(e, J);
    REQUIRE(d.J == J);
    const auto& phi = d4_phi();
    const auto& psi = d4_psi();

    // Scale coefficients: alpha_k = sum_e 2^{J/2} phi(2^J u_e - k), u = 3t/T.
    for (int k = -2; k < 3 * (1 << J); ++k) {
        double ref = 0.0;
        for (double t : e.times()) {
            const double u = 3.0 * t;
            ref += std::pow(2.0, 0.5 * J) * phi.eval(std::pow(2.0, J) * u - k);
        }
        CHECK(d.alpha_at(k) == Catch::Approx(ref).margin(1e-12));
    }
    // Detail coefficients at every level below J.
    for (int L = 0; L < J; ++L) {
        const auto& lvl = d.level(L);
        REQUIRE(lvl.level == L);
        REQUIRE(lvl.k_min() == -1);
        REQUIRE(lvl.k_max() == 3 * (1 << L));
        for (int k = lvl.k_min(); k <= lvl.k_max(); ++k) {
            double ref = 0.0, var_ref = 0.0;
            for (double t : e.times()) {
                const double u = 3.0 * t;
                const double w = psi.eval(std::pow(2.0, L) * u - k);
                ref += std::pow(2.0, 0.5 * L) * w;
                var_ref += std::pow(2.0, L) * w * w;
            }
            CHECK(lvl.beta_at(k) == Catch::Approx(ref).margin(1e-12));
            CHECK(lvl.var_at(k) == Catch::Approx(var_ref).margin(1e-12));
        }
    }
}

TEST_CASE("interior flag excludes the overhanging translates") {
    D4Level lvl;
    lvl.level = 2;  // k ranges over -1..12, interior 1..10
    CHECK_FALSE(lvl.interior(-1));
    CHECK_FALSE(lvl.interior(0));
    CHECK(lvl.interior(1));
    CHECK(lvl.interior(10));
    CHECK_FALSE(lvl.interior(11));
    CHECK_FALSE(lvl.interior(12));
}

TEST_CASE("linear projection conserves event mass approximately") {
    const auto model = IntensityModel::constant(2000.0, 1.0);
    const auto series = sample_many(model, 1, 42);
    const auto& e = series[0];
    const auto est = d4_linear_estimate(e, 4);
    const int m = 2000;
    double mass = 0.0;
    for (int j = 0; j < m; ++j)
        mass += est.eval((static_cast<double>(j) + 0.5) / m) / m;
    CHECK(mass == Catch::Approx(static_cast<double>(e.size())).epsilon(0.03));
    CHECK_THROWS_AS(est.eval(1.0), std::domain_error);
    CHECK_THROWS_AS(est.eval(-0.01), std::domain_error);
}

TEST_CASE("nonlinear selection keeps boundaries and prunes flat interiors") {
    const auto flat_series = sample_many(IntensityModel::constant(1500.0, 1.0), 1, 7);
    const auto flat = d4_estimate_nonlinear(flat_series[0], 2, 4, 0.05);
    std::size_t interior = 0, interior_kept = 0;
    for (std::size_t li = 0; li < flat.details().size(); ++li) {
        const auto& lvl = flat.details()[li];
        for (int k = lvl.k_min(); k <= lvl.k_max(); ++k) {
            const auto idx = static_cast<std::size_t>(k + 1);
            if (!lvl.interior(k)) {
                CHECK(flat.keep()[li][idx] == 1);  // boundary always kept
            } else {
                ++interior;
                interior_kept += flat.keep()[li][idx];
            }
        }
    }
    REQUIRE(interior > 0);
    CHECK(static_cast<double>(interior_kept) <= 0.2 * static_cast<double>(interior));

    const auto jumpy_series = sample_many(IntensityModel::blocks(20000.0), 1, 7);
    const auto jumpy = d4_estimate_nonlinear(jumpy_series[0], 2, 4, 0.05);
    std::size_t kept = 0;
    for (std::size_t li = 0; li < jumpy.details().size(); ++li) {
        const auto& lvl = jumpy.details()[li];
        for (int k = lvl.k_min(); k <= lvl.k_max(); ++k)
            if (lvl.interior(k)) kept += jumpy.keep()[li][static_cast<std::size_t>(k + 1)];
    }
    CHECK(kept >= 1);

    CHECK_THROWS_AS(d4_estimate_nonlinear(flat_series[0], 3, 2, 0.05), std::domain_error);
}
