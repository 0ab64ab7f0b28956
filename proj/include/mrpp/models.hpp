#pragma once

// Intensity models for Poisson processes on [0, T].  Each model evaluates
// pointwise, integrates in closed form over subintervals, reports a valid
// thinning bound (lambda_max >= sup of the intensity), and lists its
// breakpoints for quadrature cross-checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrpp/errors.hpp"

namespace mrpp {

using json = nlohmann::json;

class Intensity {
public:
    virtual ~Intensity() = default;
    virtual std::string kind() const = 0;
    virtual double horizon() const = 0;
    // Intensity value; t must lie in [0, T].
    virtual double eval(double t) const = 0;
    // Closed-form integral over [a, b] with 0 <= a <= b <= T.
    virtual double integrate(double a, double b) const = 0;
    // Upper bound for thinning; guaranteed >= sup of the intensity.
    virtual double lambda_max() const = 0;
    // Kinks and jumps, used as panel seeds for quadrature cross-checks.
    virtual std::vector<double> breakpoints() const = 0;
    virtual json params_json() const = 0;
};

namespace detail {

inline void check_domain(double t, double horizon) {
    if (!(t >= 0.0 && t <= horizon))
        throw std::domain_error("intensity eval: t outside [0, T]");
}

inline void check_range(double a, double b, double horizon) {
    if (!(a >= 0.0 && a <= b && b <= horizon))
        throw std::domain_error("intensity integrate: need 0 <= a <= b <= T");
}

} // namespace detail

// --- constant ---------------------------------------------------------------

class ConstantIntensity final : public Intensity {
public:
    ConstantIntensity(double lambda0, double horizon) : lambda0_(lambda0), horizon_(horizon) {
        if (!(lambda0 >= 0.0)) throw std::domain_error("constant: lambda0 must be >= 0");
        if (!(horizon > 0.0)) throw std::domain_error("constant: T must be > 0");
    }
    std::string kind() const override { return "constant"; }
    double horizon() const override { return horizon_; }
    double eval(double t) const override {
        detail::check_domain(t, horizon_);
        return lambda0_;
    }
    double integrate(double a, double b) const override {
        detail::check_range(a, b, horizon_);
        return lambda0_ * (b - a);
    }
    double lambda_max() const override { return lambda0_; }
    std::vector<double> breakpoints() const override { return {}; }
    json params_json() const override {
        return json{{"kind", "constant"}, {"T", horizon_}, {"lambda0", lambda0_}};
    }

private:
    double lambda0_, horizon_;
};

// --- triangular wave --------------------------------------------------------
//
// 2^V triangles on [0, T): on subinterval i of 2^(V+1) the intensity ramps
// up (i even) or down (i odd) with gradient magnitude a = 2^(V+1) xi
// lambda0 / T; values stay in [lambda0 (2-xi)/2, lambda0 (2+xi)/2] and the
// mean is lambda0.  Cell averages at level V+1 are all lambda0, so the
// process is level-(V+1) homogeneous and level-(V+2) inhomogeneous.

class TriangularIntensity final : public Intensity {
public:
    TriangularIntensity(double lambda0, double xi, int V, double horizon)
        : lambda0_(lambda0), xi_(xi), V_(V), horizon_(horizon) {
        if (!(lambda0 > 0.0)) throw std::domain_error("triangular: lambda0 must be > 0");
        if (!(xi >= 0.0 && xi <= 2.0)) throw std::domain_error("triangular: xi must be in [0, 2]");
        if (V < 0 || V > 40) throw std::domain_error("triangular: V out of range");
        if (!(horizon > 0.0)) throw std::domain_error("triangular: T must be > 0");
        segments_ = std::int64_t{1} << (V_ + 1);
        slope_ = static_cast<double>(segments_) * xi_ * lambda0_ / horizon_;
    }
    std::string kind() const override { return "triangular"; }
    double horizon() const override { return horizon_; }
    double eval(double t) const override {
        detail::check_domain(t, horizon_);
        return eval_segment(segment_index(t), t);
    }
    double integrate(double a, double b) const override {
        detail::check_range(a, b, horizon_);
        double sum = 0.0;
        std::int64_t i0 = segment_index(a);
        std::int64_t i1 = segment_index(b);
        for (std::int64_t i = i0; i <= i1; ++i) {
            double lo = std::max(a, seg_start(i));
            double hi = std::min(b, seg_start(i + 1));
            if (hi <= lo) continue;
            // Exact trapezoid: the segment is linear.
            sum += 0.5 * (eval_segment(i, lo) + eval_segment(i, hi)) * (hi - lo);
        }
        return sum;
    }
    double lambda_max() const override { return lambda0_ * (2.0 + xi_) / 2.0; }
    std::vector<double> breakpoints() const override {
        std::vector<double> bp;
        for (std::int64_t i = 1; i < segments_; ++i) bp.push_back(seg_start(i));
        return bp;
    }
    json params_json() const override {
        return json{{"kind", "triangular"}, {"T", horizon_}, {"lambda0", lambda0_},
                    {"xi", xi_}, {"V", V_}};
    }

    double lambda0() const { return lambda0_; }
    double xi() const { return xi_; }
    int V() const { return V_; }

private:
    std::int64_t segment_index(double t) const {
        auto i = static_cast<std::int64_t>(std::floor(t * static_cast<double>(segments_) / horizon_));
        return std::clamp<std::int64_t>(i, 0, segments_ - 1);
    }
    double seg_start(std::int64_t i) const {
        return static_cast<double>(i) * horizon_ / static_cast<double>(segments_);
    }
    double eval_segment(std::int64_t i, double t) const {
        double parity = static_cast<double>(i % 2);
        double s = 1.0 - 2.0 * parity;
        return lambda0_ * ((2.0 - xi_) / 2.0 + parity * xi_) + s * slope_ * (t - seg_start(i));
    }

    double lambda0_, xi_;
    int V_;
    double horizon_;
    std::int64_t segments_;
    double slope_;
};

// --- triangular wave plus sine ----------------------------------------------
//
// Adds A lambda0 sin(2^(nu+1) pi t / T + phase) to the triangular wave.
// The sine term leaves all Haar coefficients below level nu untouched, so
// innovations appear at level V+1 (triangle) and level nu (sine).  The
// constraint nu >= V + 3 keeps those sources separated.

class TriangleSineIntensity final : public Intensity {
public:
    TriangleSineIntensity(double lambda0, double xi, int V, int nu, double A, double phase,
                          double horizon)
        : tri_(lambda0, xi, V, horizon), nu_(nu), A_(A), phase_(phase) {
        if (nu < V + 3) throw std::domain_error("triangle_sine: need nu >= V + 3");
        if (nu > 40) throw std::domain_error("triangle_sine: nu out of range");
        if (!(A >= 0.0)) throw std::domain_error("triangle_sine: A must be >= 0");
        if (A > (2.0 - xi) / 2.0)
            throw std::domain_error("triangle_sine: A too large, intensity would go negative");
        omega_ = std::pow(2.0, nu_ + 1) * M_PI / horizon;
    }
    std::string kind() const override { return "triangle_sine"; }
    double horizon() const override { return tri_.horizon(); }
    double eval(double t) const override {
        return tri_.eval(t) + A_ * tri_.lambda0() * std::sin(omega_ * t + phase_);
    }
    double integrate(double a, double b) const override {
        double amp = A_ * tri_.lambda0();
        double sine = amp / omega_ * (std::cos(omega_ * a + phase_) - std::cos(omega_ * b + phase_));
        return tri_.integrate(a, b) + sine;
    }
    double lambda_max() const override { return tri_.lambda_max() + A_ * tri_.lambda0(); }
    std::vector<double> breakpoints() const override { return tri_.breakpoints(); }
    json params_json() const override {
        json j = tri_.params_json();
        j["kind"] = "triangle_sine";
        j["nu"] = nu_;
        j["A"] = A_;
        j["phase"] = phase_;
        return j;
    }

private:
    TriangularIntensity tri_;
    int nu_;
    double A_, phase_, omega_;
};

// --- benchmark test functions on [0, 1] ---------------------------------------
//
// Piecewise-constant "blocks" and rational-peak "bumps" built from the
// standard knot/height/width tables, rescaled to intensities with total mass
// 2 A0:  lambda = 1.75 A0 + 0.25 A0 f / integral(f).

namespace detail {

inline constexpr double kBlocksKnots[11] = {0.10, 0.13, 0.15, 0.23, 0.25, 0.40,
                                            0.44, 0.65, 0.76, 0.78, 0.81};
inline constexpr double kBlocksHeights[11] = {4.0, -5.0, 3.0, -4.0, 5.0, -4.2,
                                              2.1, 4.3, -3.1, 2.1, -4.2};
inline constexpr double kBumpsHeights[11] = {4.0, 5.0, 3.0, 4.0, 5.0, 4.2,
                                             2.1, 4.3, 3.1, 5.1, 4.2};
inline constexpr double kBumpsWidths[11] = {0.005, 0.005, 0.006, 0.010, 0.010, 0.030,
                                            0.010, 0.010, 0.005, 0.008, 0.005};

// f_blocks(t) = sum_j h_j (1 + sgn(t - t_j)) / 2: at a knot the step takes
// its midpoint value.
inline double blocks_raw(double t) {
    double v = 0.0;
    for (int j = 0; j < 11; ++j) {
        double d = t - kBlocksKnots[j];
        double sgn = (d > 0.0) - (d < 0.0);
        v += kBlocksHeights[j] * 0.5 * (1.0 + sgn);
    }
    return v;
}

inline double blocks_raw_integral(double a, double b) {
    // Integral of the step function: each term contributes h_j * overlap of
    // [a, b] with [t_j, 1].
    double v = 0.0;
    for (int j = 0; j < 11; ++j) {
        double lo = std::max(a, kBlocksKnots[j]);
        if (b > lo) v += kBlocksHeights[j] * (b - lo);
    }
    return v;
}

inline double bumps_raw(double t) {
    double v = 0.0;
    for (int j = 0; j < 11; ++j) {
        double u = std::fabs(t - kBlocksKnots[j]) / kBumpsWidths[j];
        double q = 1.0 + u;
        v += kBumpsHeights[j] / (q * q * q * q);
    }
    return v;
}

// Antiderivative of (1 + |u|)^-4 from 0: odd function.
inline double bumps_kernel_prim(double u) {
    double au = std::fabs(u);
    double q = 1.0 + au;
    double val = (1.0 - 1.0 / (q * q * q)) / 3.0;
    return u >= 0.0 ? val : -val;
}

inline double bumps_raw_integral(double a, double b) {
    double v = 0.0;
    for (int j = 0; j < 11; ++j) {
        double w = kBumpsWidths[j];
        v += kBumpsHeights[j] * w *
             (bumps_kernel_prim((b - kBlocksKnots[j]) / w) - bumps_kernel_prim((a - kBlocksKnots[j]) / w));
    }
    return v;
}

// Dense-grid supremum with a small safety factor; grid points include the
// endpoints so plateaus and narrow peaks are both covered.
template <typename F>
double grid_max(const F& f, double a, double b, int points = (1 << 20)) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= points; ++i) {
        double t = a + (b - a) * static_cast<double>(i) / points;
        m = std::max(m, f(t));
    }
    return m * (1.0 + 1e-6);
}

} // namespace detail

class BlocksIntensity final : public Intensity {
public:
    explicit BlocksIntensity(double A0) : A0_(A0) {
        if (!(A0 > 0.0)) throw std::domain_error("blocks: A0 must be > 0");
        norm_ = detail::blocks_raw_integral(0.0, 1.0);
        lambda_max_ = detail::grid_max([this](double t) { return eval_unchecked(t); }, 0.0, 1.0);
    }
    std::string kind() const override { return "blocks"; }
    double horizon() const override { return 1.0; }
    double eval(double t) const override {
        detail::check_domain(t, 1.0);
        return eval_unchecked(t);
    }
    double integrate(double a, double b) const override {
        detail::check_range(a, b, 1.0);
        return 1.75 * A0_ * (b - a) + 0.25 * A0_ * detail::blocks_raw_integral(a, b) / norm_;
    }
    double lambda_max() const override { return lambda_max_; }
    std::vector<double> breakpoints() const override {
        return std::vector<double>(std::begin(detail::kBlocksKnots), std::end(detail::kBlocksKnots));
    }
    json params_json() const override {
        return json{{"kind", "blocks"}, {"T", 1.0}, {"A0", A0_}};
    }

private:
    double eval_unchecked(double t) const {
        return 1.75 * A0_ + 0.25 * A0_ * detail::blocks_raw(t) / norm_;
    }
    double A0_, norm_, lambda_max_;
};

class BumpsIntensity final : public Intensity {
public:
    explicit BumpsIntensity(double A0) : A0_(A0) {
        if (!(A0 > 0.0)) throw std::domain_error("bumps: A0 must be > 0");
        norm_ = detail::bumps_raw_integral(0.0, 1.0);
        lambda_max_ = detail::grid_max([this](double t) { return eval_unchecked(t); }, 0.0, 1.0);
    }
    std::string kind() const override { return "bumps"; }
    double horizon() const override { return 1.0; }
    double eval(double t) const override {
        detail::check_domain(t, 1.0);
        return eval_unchecked(t);
    }
    double integrate(double a, double b) const override {
        detail::check_range(a, b, 1.0);
        return 1.75 * A0_ * (b - a) + 0.25 * A0_ * detail::bumps_raw_integral(a, b) / norm_;
    }
    double lambda_max() const override { return lambda_max_; }
    std::vector<double> breakpoints() const override {
        return std::vector<double>(std::begin(detail::kBlocksKnots), std::end(detail::kBlocksKnots));
    }
    json params_json() const override {
        return json{{"kind", "bumps"}, {"T", 1.0}, {"A0", A0_}};
    }

private:
    double eval_unchecked(double t) const {
        return 1.75 * A0_ + 0.25 * A0_ * detail::bumps_raw(t) / norm_;
    }
    double A0_, norm_, lambda_max_;
};

// Triangle-plus-sine test function rescaled the same way as blocks/bumps:
// lambda = A0 + A0 f / integral(f) with f the unit-mean triangular wave plus
// a sine of relative magnitude A at scale nu (phase shifted by 1/T in the
// benchmark variant).  Total mass is 2 A0.  Unlike TriangleSineIntensity the
// benchmark shape accepts any nu >= 0, since only the rescaled shape matters.

class TsineBenchIntensity final : public Intensity {
public:
    TsineBenchIntensity(double A0, double xi, int V, int nu, double A, double phase)
        : A0_(A0), tri_(1.0, xi, V, 1.0), nu_(nu), A_(A), phase_(phase) {
        if (!(A0 > 0.0)) throw std::domain_error("tsine_bench: A0 must be > 0");
        if (nu < 0 || nu > 40) throw std::domain_error("tsine_bench: nu out of range");
        if (!(A >= 0.0)) throw std::domain_error("tsine_bench: A must be >= 0");
        if (A > 1.0 + (2.0 - xi) / 2.0)
            throw std::domain_error("tsine_bench: A too large, intensity would go negative");
        omega_ = std::pow(2.0, nu_ + 1) * M_PI;
        // integral of f over [0,1]: the triangle contributes its mean 1, the
        // sine completes whole periods and contributes 0.
    }
    std::string kind() const override { return "tsine_bench"; }
    double horizon() const override { return 1.0; }
    double eval(double t) const override {
        detail::check_domain(t, 1.0);
        return A0_ * (1.0 + tri_.eval(t) + A_ * std::sin(omega_ * t + phase_));
    }
    double integrate(double a, double b) const override {
        detail::check_range(a, b, 1.0);
        double sine = A_ / omega_ * (std::cos(omega_ * a + phase_) - std::cos(omega_ * b + phase_));
        return A0_ * ((b - a) + tri_.integrate(a, b) + sine);
    }
    double lambda_max() const override { return A0_ * (1.0 + tri_.lambda_max() + A_); }
    std::vector<double> breakpoints() const override { return tri_.breakpoints(); }
    json params_json() const override {
        return json{{"kind", "tsine_bench"}, {"T", 1.0},   {"A0", A0_},
                    {"xi", tri_.xi()},       {"V", tri_.V()}, {"nu", nu_},
                    {"A", A_},               {"phase", phase_}};
    }

private:
    double A0_;
    TriangularIntensity tri_;
    int nu_;
    double A_, phase_, omega_;
};

// --- piecewise linear ---------------------------------------------------------

class PiecewiseLinearIntensity final : public Intensity {
public:
    PiecewiseLinearIntensity(std::vector<double> knots, std::vector<double> values)
        : knots_(std::move(knots)), values_(std::move(values)) {
        if (knots_.size() < 2 || knots_.size() != values_.size())
            throw std::domain_error("piecewise_linear: need matching knots/values, at least 2");
        if (knots_.front() != 0.0) throw std::domain_error("piecewise_linear: first knot must be 0");
        for (std::size_t i = 1; i < knots_.size(); ++i)
            if (!(knots_[i] > knots_[i - 1]))
                throw std::domain_error("piecewise_linear: knots must be strictly increasing");
        for (double v : values_)
            if (!(v >= 0.0)) throw std::domain_error("piecewise_linear: values must be >= 0");
    }
    std::string kind() const override { return "piecewise_linear"; }
    double horizon() const override { return knots_.back(); }
    double eval(double t) const override {
        detail::check_domain(t, horizon());
        auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - knots_.begin());
        if (i == 0) i = 1;
        if (i == knots_.size()) i = knots_.size() - 1;
        double w = (t - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
        return values_[i - 1] + w * (values_[i] - values_[i - 1]);
    }
    double integrate(double a, double b) const override {
        detail::check_range(a, b, horizon());
        double sum = 0.0;
        for (std::size_t i = 1; i < knots_.size(); ++i) {
            double lo = std::max(a, knots_[i - 1]);
            double hi = std::min(b, knots_[i]);
            if (hi <= lo) continue;
            sum += 0.5 * (eval(lo) + eval(hi)) * (hi - lo);
        }
        return sum;
    }
    double lambda_max() const override { return *std::max_element(values_.begin(), values_.end()); }
    std::vector<double> breakpoints() const override {
        return std::vector<double>(knots_.begin() + 1, knots_.end() - 1);
    }
    json params_json() const override {
        return json{{"kind", "piecewise_linear"}, {"knots", knots_}, {"values", values_}};
    }

private:
    std::vector<double> knots_, values_;
};

// --- value-semantic wrapper and factory ---------------------------------------

class IntensityModel {
public:
    IntensityModel() = default;
    explicit IntensityModel(std::shared_ptr<const Intensity> impl) : impl_(std::move(impl)) {}

    static IntensityModel constant(double lambda0, double horizon = 1.0) {
        return IntensityModel(std::make_shared<ConstantIntensity>(lambda0, horizon));
    }
    static IntensityModel triangular(double lambda0, double xi, int V, double horizon = 1.0) {
        return IntensityModel(std::make_shared<TriangularIntensity>(lambda0, xi, V, horizon));
    }
    static IntensityModel triangle_sine(double lambda0, double xi, int V, int nu, double A,
                                        double phase = 0.0, double horizon = 1.0) {
        return IntensityModel(
            std::make_shared<TriangleSineIntensity>(lambda0, xi, V, nu, A, phase, horizon));
    }
    static IntensityModel blocks(double A0) {
        return IntensityModel(std::make_shared<BlocksIntensity>(A0));
    }
    static IntensityModel bumps(double A0) {
        return IntensityModel(std::make_shared<BumpsIntensity>(A0));
    }
    static IntensityModel tsine_bench(double A0, double xi = 0.1, int V = 1, int nu = 3,
                                      double A = 0.05, double phase = 1.0) {
        return IntensityModel(std::make_shared<TsineBenchIntensity>(A0, xi, V, nu, A, phase));
    }
    static IntensityModel piecewise_linear(std::vector<double> knots, std::vector<double> values) {
        return IntensityModel(
            std::make_shared<PiecewiseLinearIntensity>(std::move(knots), std::move(values)));
    }

    static IntensityModel from_json(const json& j);

    bool valid() const { return impl_ != nullptr; }
    std::string kind() const { return impl_->kind(); }
    double horizon() const { return impl_->horizon(); }
    double eval(double t) const { return impl_->eval(t); }
    double integrate(double a, double b) const { return impl_->integrate(a, b); }
    double total_mass() const { return impl_->integrate(0.0, impl_->horizon()); }
    double lambda_max() const { return impl_->lambda_max(); }
    std::vector<double> breakpoints() const { return impl_->breakpoints(); }
    json to_json() const { return impl_->params_json(); }

private:
    std::shared_ptr<const Intensity> impl_;
};

inline IntensityModel IntensityModel::from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("model config: expected object with \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    auto get_or = [&j](const char* key, double fallback) {
        return j.contains(key) ? j.at(key).get<double>() : fallback;
    };
    try {
        if (kind == "constant") {
            return constant(j.at("lambda0").get<double>(), get_or("T", 1.0));
        } else if (kind == "triangular") {
            return triangular(j.at("lambda0").get<double>(), j.at("xi").get<double>(),
                              j.at("V").get<int>(), get_or("T", 1.0));
        } else if (kind == "triangle_sine") {
            return triangle_sine(j.at("lambda0").get<double>(), j.at("xi").get<double>(),
                                 j.at("V").get<int>(), j.at("nu").get<int>(),
                                 j.at("A").get<double>(), get_or("phase", 0.0), get_or("T", 1.0));
        } else if (kind == "blocks") {
            if (get_or("T", 1.0) != 1.0) throw ConfigError("blocks: only T = 1 is supported");
            return blocks(j.at("A0").get<double>());
        } else if (kind == "bumps") {
            if (get_or("T", 1.0) != 1.0) throw ConfigError("bumps: only T = 1 is supported");
            return bumps(j.at("A0").get<double>());
        } else if (kind == "tsine_bench") {
            if (get_or("T", 1.0) != 1.0) throw ConfigError("tsine_bench: only T = 1 is supported");
            return tsine_bench(j.at("A0").get<double>(), get_or("xi", 0.1),
                               j.contains("V") ? j.at("V").get<int>() : 1,
                               j.contains("nu") ? j.at("nu").get<int>() : 3, get_or("A", 0.05),
                               get_or("phase", 1.0));
        } else if (kind == "piecewise_linear") {
            return piecewise_linear(j.at("knots").get<std::vector<double>>(),
                                    j.at("values").get<std::vector<double>>());
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model config: ") + e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("model config: ") + e.what());
    }
    throw ConfigError("model config: unknown kind '" + kind + "'");
}

// --- exact Haar summaries ------------------------------------------------------

// Cell averages of the intensity at level J: value k is 2^J / T times the
// integral over [k 2^-J T, (k+1) 2^-J T).
inline std::vector<double> true_haar_projection(const IntensityModel& model, int J) {
    if (J < 0 || J > 30) throw std::domain_error("true_haar_projection: J out of range");
    const double T = model.horizon();
    const std::int64_t n = std::int64_t{1} << J;
    std::vector<double> out(static_cast<std::size_t>(n));
    const double scale = static_cast<double>(n) / T;
    for (std::int64_t k = 0; k < n; ++k) {
        double a = static_cast<double>(k) * T / static_cast<double>(n);
        double b = static_cast<double>(k + 1) * T / static_cast<double>(n);
        out[static_cast<std::size_t>(k)] = scale * model.integrate(a, b);
    }
    return out;
}

struct TrueHaarCoefficients {
    int j0 = 0;
    int J = 0;
    std::vector<double> alpha;               // level j0, size 2^j0
    std::vector<std::vector<double>> beta;   // levels j0..J-1
};

// Exact scaling and detail coefficients of the intensity: alpha_{j0,k} =
// 2^(j0/2)/sqrt(T) integral over the cell, beta_{j,k} = 2^(j/2)/sqrt(T)
// (left-half integral - right-half integral).
inline TrueHaarCoefficients true_coefficients(const IntensityModel& model, int j0, int J) {
    if (j0 < 0 || J < j0 || J > 30) throw std::domain_error("true_coefficients: bad levels");
    const double T = model.horizon();
    TrueHaarCoefficients out;
    out.j0 = j0;
    out.J = J;
    const std::int64_t n0 = std::int64_t{1} << j0;
    const double s0 = std::pow(2.0, 0.5 * j0) / std::sqrt(T);
    out.alpha.resize(static_cast<std::size_t>(n0));
    for (std::int64_t k = 0; k < n0; ++k) {
        double a = static_cast<double>(k) * T / static_cast<double>(n0);
        double b = static_cast<double>(k + 1) * T / static_cast<double>(n0);
        out.alpha[static_cast<std::size_t>(k)] = s0 * model.integrate(a, b);
    }
    for (int j = j0; j < J; ++j) {
        const std::int64_t nj = std::int64_t{1} << j;
        const double sj = std::pow(2.0, 0.5 * j) / std::sqrt(T);
        std::vector<double> row(static_cast<std::size_t>(nj));
        for (std::int64_t k = 0; k < nj; ++k) {
            double a = static_cast<double>(k) * T / static_cast<double>(nj);
            double b = static_cast<double>(k + 1) * T / static_cast<double>(nj);
            double mid = 0.5 * (a + b);
            row[static_cast<std::size_t>(k)] =
                sj * (model.integrate(a, mid) - model.integrate(mid, b));
        }
        out.beta.push_back(std::move(row));
    }
    return out;
}

} // namespace mrpp
