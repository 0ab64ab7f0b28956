#pragma once

// Monte Carlo harness: RMISE comparison of the thresholding strategies with
// percentile-bootstrap confidence intervals, and rejection-rate curves for
// the homogeneity and innovation tests.
//
// Reproducibility contract: replicate s always draws from
// SplitMix64::substream(seed, s), per-replicate results land in arrays
// indexed by s, and every reduction walks s in increasing order, so reports
// are byte-identical for any worker count.  All strategies inside one
// scenario consume the same simulated series (common random numbers); the
// series digest is folded into the report so two runs can prove they saw
// identical inputs.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mrpp/errors.hpp"
#include "mrpp/event_series.hpp"
#include "mrpp/haar.hpp"
#include "mrpp/lrt.hpp"
#include "mrpp/models.hpp"
#include "mrpp/rng.hpp"
#include "mrpp/simulate.hpp"
#include "mrpp/threshold.hpp"

namespace mrpp {

// Evaluation grid t_j = (j-1) T / m, j = 1..m; all points lie in [0, T).
inline std::vector<double> eval_grid(double horizon, int m) {
    if (m < 2) throw std::domain_error("eval_grid: need m >= 2");
    std::vector<double> t(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) t[static_cast<std::size_t>(j)] = horizon * j / m;
    return t;
}

// Root integrated squared error of one reconstruction against tabulated
// truth values on the grid.
inline double root_ise(const PiecewiseConstantFn& fn, std::span<const double> grid,
                       std::span<const double> truth) {
    if (grid.size() != truth.size() || grid.empty())
        throw std::domain_error("root_ise: grid/truth size mismatch");
    double acc = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double d = fn.evaluate(grid[j]) - truth[j];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(grid.size()));
}

// Mean over reconstructions of the per-reconstruction root ISE.
inline double rmise(std::span<const PiecewiseConstantFn> estimates, const IntensityModel& truth,
                    int m) {
    if (estimates.empty()) throw std::domain_error("rmise: no estimates");
    const auto grid = eval_grid(truth.horizon(), m);
    std::vector<double> tv(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) tv[j] = truth.eval(grid[j]);
    double acc = 0.0;
    for (const auto& fn : estimates) acc += root_ise(fn, grid, tv);
    return acc / static_cast<double>(estimates.size());
}

// Type-7 quantile of a sorted sample (the common linear-interpolation rule).
inline double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::domain_error("quantile: empty sample");
    if (p <= 0.0) return sorted.front();
    if (p >= 1.0) return sorted.back();
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(h);
    if (i + 1 >= sorted.size()) return sorted.back();
    const double w = h - static_cast<double>(i);
    return sorted[i] + w * (sorted[i + 1] - sorted[i]);
}

struct BootstrapCi {
    double lo = 0.0;
    double hi = 0.0;
};

// Percentile bootstrap for the mean of `values`; deterministic under seed.
inline BootstrapCi bootstrap_ci(std::span<const double> values, int B, double level,
                                std::uint64_t seed) {
    if (values.empty()) throw std::domain_error("bootstrap_ci: empty sample");
    if (B < 1000) throw std::domain_error("bootstrap_ci: need B >= 1000");
    if (!(level > 0.0 && level < 1.0)) throw std::domain_error("bootstrap_ci: level in (0,1)");
    const auto n = values.size();
    std::vector<double> means(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b) {
        auto rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(b));
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            auto idx = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n));
            if (idx >= n) idx = n - 1;
            acc += values[idx];
        }
        means[static_cast<std::size_t>(b)] = acc / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    const double tail = 0.5 * (1.0 - level);
    return {quantile_sorted(means, tail), quantile_sorted(means, 1.0 - tail)};
}

// True cell masses mu_k = integral of lambda over cell k at `level`,
// multiplied by the number of pooled realizations.  The chi-square
// approximations are considered reliable when every mass is >= 100.
inline double min_cell_mass(const IntensityModel& model, int level, int realizations) {
    const double T = model.horizon();
    const auto cells = std::int64_t{1} << level;
    double lo = std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k < cells; ++k) {
        const double a = T * static_cast<double>(k) / static_cast<double>(cells);
        const double b = T * static_cast<double>(k + 1) / static_cast<double>(cells);
        lo = std::min(lo, static_cast<double>(realizations) * model.integrate(a, b));
    }
    return lo;
}

inline constexpr double kMassThreshold = 100.0;

// What to do when a scenario fails the mass condition: drop the LRT-based
// strategies (recorded as skipped with reason), or run them anyway and
// carry a warning in the report.
enum class MassPolicy { Skip, Warn };

inline std::string to_string(MassPolicy p) { return p == MassPolicy::Skip ? "skip" : "warn"; }

inline MassPolicy mass_policy_from_string(const std::string& s) {
    if (s == "skip") return MassPolicy::Skip;
    if (s == "warn") return MassPolicy::Warn;
    throw ConfigError("unknown mass policy: " + s);
}

struct BenchScenario {
    std::string name;
    IntensityModel model;
    int j0 = 3;
    int J = 7;
    int M = 1;           // realizations pooled into one estimate
    double alpha = 0.05;
    double omega = 3.0;
    int n = 1000;        // simulations
    int m = 1000;        // evaluation grid size
    std::uint64_t seed = 20240901;
    BoundaryPolicy policy = BoundaryPolicy::Conservative;
    bool lrtg_invert = false;
    MassPolicy mass_policy = MassPolicy::Skip;
};

inline BenchScenario scenario_from_json(const nlohmann::json& j) {
    BenchScenario s;
    try {
        s.name = j.at("name").get<std::string>();
        s.model = IntensityModel::from_json(j.at("model"));
        if (j.contains("j0")) s.j0 = j.at("j0").get<int>();
        if (j.contains("J")) s.J = j.at("J").get<int>();
        if (j.contains("M")) s.M = j.at("M").get<int>();
        if (j.contains("alpha")) s.alpha = j.at("alpha").get<double>();
        if (j.contains("omega")) s.omega = j.at("omega").get<double>();
        if (j.contains("n")) s.n = j.at("n").get<int>();
        if (j.contains("m")) s.m = j.at("m").get<int>();
        if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("boundary_policy"))
            s.policy = boundary_policy_from_string(j.at("boundary_policy").get<std::string>());
        if (j.contains("lrtg_invert")) s.lrtg_invert = j.at("lrtg_invert").get<bool>();
        if (j.contains("mass_policy"))
            s.mass_policy = mass_policy_from_string(j.at("mass_policy").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    if (s.j0 < 0 || s.J < s.j0) throw ConfigError("scenario: need 0 <= j0 <= J");
    if (s.M < 1 || s.n < 1 || s.m < 2) throw ConfigError("scenario: need M >= 1, n >= 1, m >= 2");
    return s;
}

struct StrategyReport {
    Strategy strategy = Strategy::Linear;
    bool skipped = false;
    std::string skip_reason;
    double rmise = 0.0;
    BootstrapCi ci;
    double r_rmise = 1.0;
    double kept_mean = 0.0;  // mean kept detail coefficients per simulation
};

struct ScenarioReport {
    std::string name;
    nlohmann::json scenario_echo;
    double min_mass = 0.0;
    bool mass_ok = true;
    std::uint64_t input_digest = 0;
    double runtime_seconds = 0.0;
    int n = 0;
    std::vector<StrategyReport> strategies;
};

namespace bench_detail {

inline const Strategy kStrategies[] = {Strategy::Linear, Strategy::DmLocal, Strategy::LrtLocal,
                                       Strategy::LrtIntermediate, Strategy::LrtGlobal};
inline constexpr std::size_t kStrategyCount = 5;

inline bool uses_lrt(Strategy s) {
    return s == Strategy::LrtLocal || s == Strategy::LrtIntermediate || s == Strategy::LrtGlobal;
}

// Runs body(s) for s = 0..n-1 across `jobs` threads.  The body writes only
// to slot s of preallocated arrays, keeping results independent of the
// schedule.
template <class Body>
inline void parallel_for(int n, int jobs, Body&& body) {
    if (jobs < 1) jobs = 1;
    if (jobs == 1 || n < 2) {
        for (int s = 0; s < n; ++s) body(s);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int s = next.fetch_add(1);
            if (s >= n) return;
            body(s);
        }
    };
    std::vector<std::thread> pool;
    const int use = std::min(jobs, n);
    pool.reserve(static_cast<std::size_t>(use));
    for (int w = 0; w < use; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace bench_detail

// One scenario, all five strategies on shared simulated series.
inline ScenarioReport run_scenario(const BenchScenario& sc, int jobs = 1) {
    using bench_detail::kStrategies;
    using bench_detail::kStrategyCount;
    const auto t_start = std::chrono::steady_clock::now();

    ScenarioReport rep;
    rep.name = sc.name;
    rep.n = sc.n;
    rep.scenario_echo = nlohmann::json{
        {"name", sc.name},           {"model", sc.model.to_json()},
        {"j0", sc.j0},               {"J", sc.J},
        {"M", sc.M},                 {"alpha", sc.alpha},
        {"omega", sc.omega},         {"n", sc.n},
        {"m", sc.m},                 {"seed", sc.seed},
        {"boundary_policy", to_string(sc.policy)},
        {"lrtg_invert", sc.lrtg_invert},
        {"mass_policy", to_string(sc.mass_policy)},
    };
    rep.min_mass = min_cell_mass(sc.model, sc.J + 1, sc.M);
    rep.mass_ok = rep.min_mass >= kMassThreshold;
    const bool skip_lrt = !rep.mass_ok && sc.mass_policy == MassPolicy::Skip;

    const auto grid = eval_grid(sc.model.horizon(), sc.m);
    std::vector<double> truth(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) truth[j] = sc.model.eval(grid[j]);

    ThresholdOptions opt;
    opt.alpha = sc.alpha;
    opt.omega = sc.omega;
    opt.policy = sc.policy;
    opt.lrtg_invert = sc.lrtg_invert;

    // errs[strategy][sim]; kept[strategy][sim]; digests[sim].
    std::vector<std::vector<double>> errs(kStrategyCount);
    std::vector<std::vector<double>> kept(kStrategyCount);
    for (auto& v : errs) v.assign(static_cast<std::size_t>(sc.n), 0.0);
    for (auto& v : kept) v.assign(static_cast<std::size_t>(sc.n), 0.0);
    std::vector<std::uint64_t> digests(static_cast<std::size_t>(sc.n), 0);

    bench_detail::parallel_for(sc.n, jobs, [&](int s) {
        auto rng = SplitMix64::substream(sc.seed, static_cast<std::uint64_t>(s));
        std::vector<EventSeries> series;
        series.reserve(static_cast<std::size_t>(sc.M));
        std::uint64_t dig = 0;
        for (int r = 0; r < sc.M; ++r) {
            series.push_back(sample(sc.model, rng));
            dig ^= series.back().digest();
        }
        digests[static_cast<std::size_t>(s)] = dig;
        const auto lc = threshold_detail::build_level_counts(series, sc.j0, sc.J);
        for (std::size_t si = 0; si < kStrategyCount; ++si) {
            const Strategy st = kStrategies[si];
            if (skip_lrt && bench_detail::uses_lrt(st)) continue;
            const ThresholdMask mask = make_mask(lc, st, opt);
            const PiecewiseConstantFn fn = reconstruct_masked(lc, mask);
            errs[si][static_cast<std::size_t>(s)] = root_ise(fn, grid, truth);
            kept[si][static_cast<std::size_t>(s)] = static_cast<double>(mask.kept_count());
        }
        // Common-random-numbers check: the inputs must be untouched after
        // every strategy consumed them.
        std::uint64_t dig2 = 0;
        for (const auto& e : series) dig2 ^= e.digest();
        if (dig2 != dig) throw StatError("run_scenario: series mutated during strategy loop");
    });

    for (std::uint64_t d : digests) rep.input_digest ^= d;

    double linear_rmise = 0.0;
    for (std::size_t si = 0; si < kStrategyCount; ++si) {
        const Strategy st = kStrategies[si];
        StrategyReport sr;
        sr.strategy = st;
        if (skip_lrt && bench_detail::uses_lrt(st)) {
            sr.skipped = true;
            char buf[128];
            std::snprintf(buf, sizeof buf, "mass condition violated: min cell mass %.3f < %.0f",
                          rep.min_mass, kMassThreshold);
            sr.skip_reason = buf;
            rep.strategies.push_back(std::move(sr));
            continue;
        }
        double acc = 0.0, kacc = 0.0;
        for (int s = 0; s < sc.n; ++s) {
            acc += errs[si][static_cast<std::size_t>(s)];
            kacc += kept[si][static_cast<std::size_t>(s)];
        }
        sr.rmise = acc / static_cast<double>(sc.n);
        sr.kept_mean = kacc / static_cast<double>(sc.n);
        sr.ci = bootstrap_ci(errs[si], 2000, 0.95,
                             sc.seed ^ (0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(si)));
        if (st == Strategy::Linear) linear_rmise = sr.rmise;
        sr.r_rmise = (st == Strategy::Linear) ? 1.0 : sr.rmise / linear_rmise;
        rep.strategies.push_back(std::move(sr));
    }

    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

// CSV mirrors the benchmark table layout: one row per (scenario, strategy).
// Deliberately excludes runtime so the bytes are identical across runs and
// worker counts.
inline std::string bench_csv(std::span<const ScenarioReport> reports) {
    std::string out = "scenario,strategy,rmise,ci_lo,ci_hi,r_rmise,kept_mean,skipped,skip_reason\n";
    char buf[512];
    for (const auto& rep : reports) {
        for (const auto& sr : rep.strategies) {
            if (sr.skipped) {
                std::snprintf(buf, sizeof buf, "%s,%s,,,,,,1,%s\n", rep.name.c_str(),
                              to_string(sr.strategy).c_str(), sr.skip_reason.c_str());
            } else {
                std::snprintf(buf, sizeof buf, "%s,%s,%.10g,%.10g,%.10g,%.6f,%.3f,0,\n",
                              rep.name.c_str(), to_string(sr.strategy).c_str(), sr.rmise,
                              sr.ci.lo, sr.ci.hi, sr.r_rmise, sr.kept_mean);
            }
            out += buf;
        }
    }
    return out;
}

// JSON carries full metadata, including runtime and whatever extra context
// the caller supplies (seed provenance, revision, command line).
inline nlohmann::json bench_json(std::span<const ScenarioReport> reports,
                                 const nlohmann::json& extra = nlohmann::json::object()) {
    nlohmann::json out;
    out["metadata"] = extra;
    out["scenarios"] = nlohmann::json::array();
    for (const auto& rep : reports) {
        nlohmann::json jr;
        jr["name"] = rep.name;
        jr["config"] = rep.scenario_echo;
        jr["min_cell_mass"] = rep.min_mass;
        jr["mass_ok"] = rep.mass_ok;
        char dig[32];
        std::snprintf(dig, sizeof dig, "%016llx", static_cast<unsigned long long>(rep.input_digest));
        jr["input_digest"] = dig;
        jr["runtime_seconds"] = rep.runtime_seconds;
        jr["n"] = rep.n;
        jr["strategies"] = nlohmann::json::array();
        for (const auto& sr : rep.strategies) {
            nlohmann::json js;
            js["strategy"] = to_string(sr.strategy);
            js["skipped"] = sr.skipped;
            if (sr.skipped) {
                js["skip_reason"] = sr.skip_reason;
            } else {
                js["rmise"] = sr.rmise;
                js["ci"] = {sr.ci.lo, sr.ci.hi};
                js["r_rmise"] = sr.r_rmise;
                js["kept_mean"] = sr.kept_mean;
            }
            jr["strategies"].push_back(std::move(js));
        }
        out["scenarios"].push_back(std::move(jr));
    }
    return out;
}

// Rejection-rate curves for the multiscale tests over a rate sweep.
enum class CurveTest { Homogeneity, Innovation };

inline std::string to_string(CurveTest t) {
    return t == CurveTest::Homogeneity ? "homogeneity" : "innovation";
}

inline CurveTest curve_test_from_string(const std::string& s) {
    if (s == "homogeneity") return CurveTest::Homogeneity;
    if (s == "innovation") return CurveTest::Innovation;
    throw ConfigError("unknown test: " + s);
}

struct SizePowerPoint {
    double lambda0 = 0.0;
    int n = 0;
    int rejections = 0;
    double rate = 0.0;
    double se = 0.0;       // binomial standard error
    double min_mass = 0.0;
    bool mass_ok = true;
};

// `make_model(lambda0)` builds the model for each sweep point.  The mass
// condition is evaluated at the level whose counts the test consumes (J for
// homogeneity, L + 1 for innovation) and flagged, never enforced.
template <class ModelFactory>
inline std::vector<SizePowerPoint> size_power_curve(ModelFactory&& make_model, CurveTest test,
                                                    int level, double alpha,
                                                    std::span<const double> lambda0s, int n, int M,
                                                    std::uint64_t seed,
                                                    BoundaryPolicy policy = BoundaryPolicy::Conservative,
                                                    int jobs = 1) {
    if (n < 1 || M < 1) throw std::domain_error("size_power_curve: need n >= 1, M >= 1");
    std::vector<SizePowerPoint> out;
    for (std::size_t pi = 0; pi < lambda0s.size(); ++pi) {
        const double lambda0 = lambda0s[pi];
        const IntensityModel model = make_model(lambda0);
        SizePowerPoint pt;
        pt.lambda0 = lambda0;
        pt.n = n;
        const int mass_level = (test == CurveTest::Homogeneity) ? level : level + 1;
        pt.min_mass = min_cell_mass(model, mass_level, M);
        pt.mass_ok = pt.min_mass >= kMassThreshold;
        std::vector<std::uint8_t> rejected(static_cast<std::size_t>(n), 0);
        bench_detail::parallel_for(n, jobs, [&](int s) {
            const std::uint64_t stream =
                (static_cast<std::uint64_t>(pi) << 32) | static_cast<std::uint64_t>(s);
            auto rng = SplitMix64::substream(seed, stream);
            std::vector<EventSeries> series;
            series.reserve(static_cast<std::size_t>(M));
            for (int r = 0; r < M; ++r) series.push_back(sample(model, rng));
            const LrtOutcome res = (test == CurveTest::Homogeneity)
                                       ? test_homogeneity(series, level, alpha)
                                       : test_innovation(series, level, alpha, policy);
            rejected[static_cast<std::size_t>(s)] = res.reject ? 1 : 0;
        });
        for (auto r : rejected) pt.rejections += r;
        pt.rate = static_cast<double>(pt.rejections) / static_cast<double>(n);
        pt.se = std::sqrt(pt.rate * (1.0 - pt.rate) / static_cast<double>(n));
        out.push_back(pt);
    }
    return out;
}

// Default sweep from the power-curve studies: 10 log-spaced rates spanning
// [1000, 50000].
inline std::vector<double> default_lambda0_sweep() {
    std::vector<double> out;
    const double lo = std::log(1000.0), hi = std::log(50000.0);
    for (int i = 0; i < 10; ++i) out.push_back(std::exp(lo + (hi - lo) * i / 9.0));
    return out;
}

inline std::string size_power_csv(std::span<const SizePowerPoint> points) {
    std::string out = "lambda0,n,rejections,rate,se,min_mass,mass_ok\n";
    char buf[256];
    for (const auto& pt : points) {
        std::snprintf(buf, sizeof buf, "%.10g,%d,%d,%.6f,%.6f,%.6g,%d\n", pt.lambda0, pt.n,
                      pt.rejections, pt.rate, pt.se, pt.min_mass, pt.mass_ok ? 1 : 0);
        out += buf;
    }
    return out;
}

} // namespace mrpp
