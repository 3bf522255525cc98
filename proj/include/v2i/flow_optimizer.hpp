#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "v2i/rates.hpp"
#include "v2i/scenario.hpp"
#include "v2i/special_functions.hpp"

namespace v2i {

// Largest speed keeping P(spacing <= v * tau) at the crash tolerance, under
// log-normal inter-vehicle spacing.
inline double v_safe(double crash_tolerance, double processing_time, double spacing_mu,
                     double spacing_sigma) {
    if (!(crash_tolerance > 0.0 && crash_tolerance < 1.0))
        throw std::domain_error("v_safe: crash tolerance must lie in (0, 1)");
    if (!(processing_time > 0.0) || !(spacing_sigma > 0.0))
        throw std::domain_error("v_safe: processing time and sigma must be positive");
    const double quantile = erf_inv(2.0 * crash_tolerance - 1.0);
    return std::exp(spacing_sigma * std::numbers::sqrt2 * quantile + spacing_mu) /
           processing_time;
}

// P(spacing <= v * tau): the log-normal CDF at the distance covered during
// the processing time.
inline double crash_probability(double speed, double processing_time, double spacing_mu,
                                double spacing_sigma) {
    if (!(processing_time > 0.0) || !(spacing_sigma > 0.0))
        throw std::domain_error("crash_probability: processing time and sigma must be positive");
    if (speed <= 0.0) return 0.0;
    const double x = (std::log(speed * processing_time) - spacing_mu) /
                     (spacing_sigma * std::numbers::sqrt2);
    return 0.5 * (1.0 + std::erf(x));
}

// Mean traffic flow Q = v * E[1/spacing] in vehicles per second.
inline double traffic_flow(double speed, double spacing_mu, double spacing_sigma) {
    if (speed < 0.0) throw std::domain_error("traffic_flow: speed must be nonnegative");
    return speed * std::exp((spacing_sigma * spacing_sigma - 2.0 * spacing_mu) / 2.0);
}

struct RateModelOptions {
    WorstCaseModel geometry = WorstCaseModel::half_line;
    NoiseExponent noise = NoiseExponent::exact;
    bool interference = true;
    double quad_tol = 1e-9;
};

namespace detail {

// Data-rate speed bound before the feasibility cut; negative when the link
// cannot meet the threshold at any speed. Keeping the raw value makes the
// density search objective continuous across the feasibility boundary.
inline double v_data_raw(const ScenarioConfig& cfg, double mu, const RateModelOptions& opts) {
    const SinrDistribution dist(worst_case_coefficients(cfg, mu, opts.geometry, opts.interference),
                                opts.noise);
    const double rate = ergodic_rate_quadrature(dist, opts.quad_tol);
    const double supply = cfg.bandwidth * rate;
    if (!(supply > 0.0)) return -1e30;
    return (1.0 - cfg.rate_threshold / supply) / (cfg.normalized_ho_delay() * mu);
}

}  // namespace detail

// Largest speed meeting the HO-aware rate threshold at the worst-case link,
// or nullopt when the demand exceeds what the link can deliver at any speed.
inline std::optional<double> v_data(const ScenarioConfig& cfg, double mu,
                                    const RateModelOptions& opts = {}) {
    if (!(mu > 0.0)) throw std::domain_error("v_data: mu must be positive");
    const double raw = detail::v_data_raw(cfg, mu, opts);
    if (raw < 0.0) return std::nullopt;
    return raw;
}

enum class Binding { safe, data, max };

inline const char* to_string(Binding b) {
    switch (b) {
        case Binding::safe: return "safe";
        case Binding::data: return "data";
        default: return "max";
    }
}

struct SpeedBounds {
    double v_safe = 0.0;
    double v_data = 0.0;
    double v_max = 0.0;
    Binding binding = Binding::safe;
};

// min of the three speed caps; ties label safe over data over max.
inline std::optional<SpeedBounds> optimal_speed(const ScenarioConfig& cfg, double mu,
                                                const RateModelOptions& opts = {}) {
    const auto vd = v_data(cfg, mu, opts);
    if (!vd) return std::nullopt;
    SpeedBounds out;
    out.v_safe = v_safe(cfg.crash_tolerance, cfg.processing_time, cfg.spacing_mu,
                        cfg.spacing_sigma);
    out.v_data = *vd;
    out.v_max = cfg.v_max;
    const double v = std::min({out.v_safe, out.v_data, out.v_max});
    out.binding = v == out.v_safe ? Binding::safe
                 : v == out.v_data ? Binding::data
                                   : Binding::max;
    return out;
}

inline double bound_speed(const SpeedBounds& b) {
    return std::min({b.v_safe, b.v_data, b.v_max});
}

class OptimizationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct GoldenSectionResult {
    double argmax = 0.0;
    double value = 0.0;
    int iterations = 0;
};

// Derivative-free bracketing maximizer for unimodal objectives. The bracket
// shrinks by the golden ratio each iteration, so the count is logarithmic in
// (hi - lo) / tol. On multimodal objectives it settles on one local maximum.
template <class F>
GoldenSectionResult golden_section_maximize(F&& f, double lo, double hi, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("golden_section_maximize: empty bracket");
    if (!(tol > 0.0)) throw std::invalid_argument("golden_section_maximize: tol must be positive");
    constexpr double invphi = 0.6180339887498949;  // 1/phi
    auto eval = [&f](double x) {
        const double y = f(x);
        if (!std::isfinite(y)) {
            std::ostringstream oss;
            oss << "golden_section_maximize: objective not finite at x = " << x;
            throw OptimizationError(oss.str());
        }
        return y;
    };
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = eval(x1), f2 = eval(x2);
    GoldenSectionResult res;
    while (hi - lo > tol) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = eval(x2);
        }
        ++res.iterations;
    }
    res.argmax = 0.5 * (lo + hi);
    res.value = eval(res.argmax);
    return res;
}

struct PlanResult {
    double mu_star = 0.0;        // BSs per meter
    double v_star = 0.0;         // m/s; 0 when infeasible
    double q_star = 0.0;         // vehicles per second; 0 when infeasible
    bool feasible = false;
    Binding binding = Binding::safe;
    std::vector<std::pair<double, double>> search_trace;  // (mu, raw data-speed bound)
};

struct OptimizeOptions {
    RateModelOptions rate;
    int grid_points = 16;
    double tol = 1e-7;  // BSs per meter
};

// Maximizes the data-rate speed bound over [1/L, mu_max]: a coarse grid
// picks the bracket, golden-section search refines it. The raw (possibly
// negative) bound is the search objective so infeasible regions steer the
// bracket instead of erroring out.
inline PlanResult optimize_density(const ScenarioConfig& cfg, const OptimizeOptions& opts = {}) {
    if (opts.grid_points < 3)
        throw std::invalid_argument("optimize_density: need at least three grid points");
    const double mu_lo = 1.0 / cfg.road_length;
    const double mu_hi = cfg.mu_max;
    if (!(mu_lo < mu_hi))
        throw std::invalid_argument("optimize_density: mu_max below 1/road_length");

    PlanResult plan;
    auto objective = [&](double mu) {
        const double value = detail::v_data_raw(cfg, mu, opts.rate);
        plan.search_trace.emplace_back(mu, value);
        return value;
    };

    std::vector<double> grid(opts.grid_points);
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < opts.grid_points; ++i) {
        grid[i] = mu_lo + (mu_hi - mu_lo) * i / (opts.grid_points - 1);
        const double value = objective(grid[i]);
        if (value > best_value) {
            best_value = value;
            best = i;
        }
    }
    const double b_lo = grid[best > 0 ? best - 1 : 0];
    const double b_hi = grid[best + 1 < opts.grid_points ? best + 1 : opts.grid_points - 1];
    double mu_star = grid[best];
    if (b_lo < b_hi) {
        const auto gss = golden_section_maximize(objective, b_lo, b_hi, opts.tol);
        mu_star = gss.argmax;
    }
    // Boundary attainment: prefer the cap itself when it is at least as good.
    if (mu_hi - mu_star <= 3.0 * opts.tol &&
        detail::v_data_raw(cfg, mu_hi, opts.rate) >= detail::v_data_raw(cfg, mu_star, opts.rate))
        mu_star = mu_hi;

    plan.mu_star = mu_star;
    const auto bounds = optimal_speed(cfg, mu_star, opts.rate);
    if (!bounds) {
        plan.feasible = false;
        return plan;
    }
    plan.feasible = true;
    plan.binding = bounds->binding;
    plan.v_star = bound_speed(*bounds);
    plan.q_star = traffic_flow(plan.v_star, cfg.spacing_mu, cfg.spacing_sigma);
    return plan;
}

}  // namespace v2i
