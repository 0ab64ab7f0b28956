#pragma once

// Poisson process sampling on [0, T): homogeneous via i.i.d. exponential
// gaps, inhomogeneous via thinning of a dominating homogeneous process at
// rate lambda_max.  Replicate m always draws from SplitMix64::substream
// (seed, m), so collections are reproducible and order-independent.

#include <cstdint>
#include <vector>

#include "mrpp/event_series.hpp"
#include "mrpp/models.hpp"
#include "mrpp/rng.hpp"

namespace mrpp {

// Homogeneous Poisson process at a constant rate.
inline EventSeries sample_homogeneous(double rate, double horizon, SplitMix64& rng) {
    if (!(rate >= 0.0)) throw std::domain_error("sample_homogeneous: rate must be >= 0");
    if (!(horizon > 0.0)) throw std::domain_error("sample_homogeneous: horizon must be > 0");
    std::vector<double> times;
    if (rate > 0.0) {
        times.reserve(static_cast<std::size_t>(rate * horizon * 1.1) + 16);
        double t = rng.exponential(rate);
        while (t < horizon) {
            // Gaps are strictly positive, but guard against t + gap == t at
            // extreme rates so the series stays strictly increasing.
            if (times.empty() || t > times.back()) times.push_back(t);
            t += rng.exponential(rate);
        }
    }
    return EventSeries(std::move(times), horizon);
}

// Inhomogeneous Poisson process by thinning: propose at rate lambda_max,
// accept a proposal at time t with probability lambda(t) / lambda_max.
inline EventSeries sample_inhomogeneous(const IntensityModel& model, SplitMix64& rng) {
    const double horizon = model.horizon();
    const double bound = model.lambda_max();
    if (!(bound >= 0.0)) throw std::domain_error("sample_inhomogeneous: invalid lambda_max");
    std::vector<double> times;
    if (bound > 0.0) {
        times.reserve(static_cast<std::size_t>(bound * horizon * 0.9) + 16);
        double t = rng.exponential(bound);
        while (t < horizon) {
            if (rng.uniform01() * bound < model.eval(t)) {
                if (times.empty() || t > times.back()) times.push_back(t);
            }
            t += rng.exponential(bound);
        }
    }
    return EventSeries(std::move(times), horizon);
}

// Convenience: dispatches constant models to the gap sampler (no wasted
// acceptance draws), everything else to thinning.
inline EventSeries sample(const IntensityModel& model, SplitMix64& rng) {
    if (model.kind() == "constant")
        return sample_homogeneous(model.lambda_max(), model.horizon(), rng);
    return sample_inhomogeneous(model, rng);
}

// M independent realizations; replicate m uses substream(seed, m).
inline std::vector<EventSeries> sample_many(const IntensityModel& model, int M,
                                            std::uint64_t seed) {
    if (M < 1) throw std::domain_error("sample_many: M must be >= 1");
    std::vector<EventSeries> out;
    out.reserve(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
        SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(m));
        out.push_back(sample(model, rng));
    }
    return out;
}

} // namespace mrpp
