#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "mrpp/rng.hpp"

using namespace mrpp;

TEST_CASE("substreams are deterministic and distinct") {
    auto a = SplitMix64::substream(42, 7);
    auto b = SplitMix64::substream(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    auto c = SplitMix64::substream(42, 8);
    auto d = SplitMix64::substream(43, 7);
    std::set<std::uint64_t> firsts{SplitMix64::substream(42, 7).next(), c.next(), d.next()};
    CHECK(firsts.size() == 3);
}

TEST_CASE("uniform01 lies in the half-open unit interval") {
    auto rng = SplitMix64::substream(1, 0);
    double lo = 1.0, hi = 0.0, acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        acc += u;
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
    // mean 1/2, sd of the mean = 1/sqrt(12 n)
    CHECK(std::fabs(acc / n - 0.5) < 3.0 / std::sqrt(12.0 * n));
}

TEST_CASE("exponential draws have the requested rate") {
    auto rng = SplitMix64::substream(2, 0);
    const double rate = 4.0;
    const int n = 100000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.exponential(rate);
        REQUIRE(x > 0.0);
        acc += x;
    }
    // mean 1/rate, sd of the mean = 1/(rate sqrt(n))
    CHECK(std::fabs(acc / n - 1.0 / rate) < 3.0 / (rate * std::sqrt(double(n))));
}
