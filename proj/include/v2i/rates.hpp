#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "v2i/coefficients.hpp"
#include "v2i/quadrature.hpp"
#include "v2i/scenario.hpp"
#include "v2i/sinr_distribution.hpp"

namespace v2i {

struct HoCost {
    double value = 0.0;     // clamped to [0, 1]
    double raw = 0.0;       // h_d * mu * v / (mu_max * v_max) before clamping
    bool saturated = false; // raw reached 1: every rate is wiped out by handoffs
};

inline HoCost ho_cost(double ho_delay, double mu, double speed, double mu_max, double v_max) {
    if (!(ho_delay > 0.0) || !(mu > 0.0) || !(mu_max > 0.0) || !(v_max > 0.0))
        throw std::domain_error("ho_cost: delay, densities and caps must be positive");
    if (speed < 0.0) throw std::domain_error("ho_cost: speed must be nonnegative");
    HoCost out;
    out.raw = ho_delay * mu * speed / (mu_max * v_max);
    out.saturated = out.raw >= 1.0;
    out.value = std::clamp(out.raw, 0.0, 1.0);
    return out;
}

// Rule used to invert the rate requirement into an SINR threshold.
// shannon inverts M = W log2(1 + Z)(1 - Hc) exactly; pow2 drops the -1.
enum class ThresholdVariant { pow2, shannon };

inline const char* to_string(ThresholdVariant v) {
    return v == ThresholdVariant::shannon ? "shannon" : "pow2";
}

inline double sinr_threshold(double rate_threshold, double bandwidth, double ho_cost_value,
                             ThresholdVariant variant = ThresholdVariant::shannon) {
    if (!(rate_threshold >= 0.0) || !(bandwidth > 0.0))
        throw std::domain_error("sinr_threshold: bad rate or bandwidth");
    if (!(ho_cost_value >= 0.0 && ho_cost_value < 1.0))
        throw std::domain_error("sinr_threshold: infeasible, handoff cost has saturated");
    const double load = rate_threshold / (bandwidth * (1.0 - ho_cost_value));
    const double p = std::exp2(load);
    return variant == ThresholdVariant::shannon ? p - 1.0 : p;
}

// Fading-averaged spectral efficiency E[log2(1 + Z)] in bit/s/Hz, evaluated
// as (1/ln 2) * Int_0^inf (1 - F(z)) / (1 + z) dz. The integrand is cut at
// Z_cut where the tail bound sum_k |w_k| e_k a / (b_k z) guarantees a
// remainder below 1e-12, and the finite part runs through the adaptive
// Gauss-Kronrod scheme on decade-spaced seed segments.
inline double ergodic_rate_quadrature(const SinrDistribution& dist, double abs_tol = 1e-9) {
    const auto& c = dist.coefficients();
    long double bound = 0.0L;
    for (std::size_t k = 0; k < c.interferer_coeffs.size(); ++k)
        bound += std::abs(dist.partial_fraction_weights()[k]) * dist.noise_factors()[k] *
                 static_cast<long double>(c.serving_coeff) / c.interferer_coeffs[k];
    if (c.interferer_coeffs.empty())
        bound = c.serving_coeff / (c.fading_rate * c.noise_power);  // exp tail is far smaller
    long double z_cut = std::clamp(bound * 1e12L, 1.0e6L, 1.0e26L);

    std::vector<long double> brk{0.0L};
    for (long double z = 1e-9L; z < z_cut; z *= 10.0L) brk.push_back(z);
    brk.push_back(z_cut);

    auto integrand = [&dist](double z) {
        return static_cast<double>(dist.survival(static_cast<long double>(z)) /
                                   (1.0L + static_cast<long double>(z)));
    };
    const QuadratureResult q =
        integrate_adaptive(integrand, brk, static_cast<long double>(abs_tol));
    return static_cast<double>(q.value) / std::numbers::ln2;
}

// The printed closed form for the same quantity:
//   (1/ln 2) sum_k beta_k a e^{+lambda N / b_k} / (a - b_k) * w_k,
//   beta_k = ln(a / b_k) + atan2(lambda / b_k, 0).
// The atan2 term is a constant pi/2 whenever lambda > 0, which inflates the
// sum well beyond the integral it is supposed to equal, so the value is
// always reported next to the quadrature reference and flagged when the two
// disagree by more than 0.1% relative. Keep the quadrature path for
// anything that feeds decisions.
struct ClosedFormRate {
    double value = 0.0;          // printed closed form, bit/s/Hz
    double reference = 0.0;      // quadrature evaluation, bit/s/Hz
    double rel_deviation = 0.0;
    bool flagged = false;
};

inline ClosedFormRate ergodic_rate_closed(const SinrDistribution& dist) {
    const auto& c = dist.coefficients();
    const long double a = c.serving_coeff;
    const long double lam = c.fading_rate;
    long double sum = 0.0L;
    for (std::size_t k = 0; k < c.interferer_coeffs.size(); ++k) {
        const long double bk = c.interferer_coeffs[k];
        if (std::abs(a - bk) <= 1e-12L * a)
            throw std::domain_error(
                "ergodic_rate_closed: interferer coefficient equals the serving coefficient; "
                "the printed form is singular there");
        const long double beta =
            std::log(a / bk) + std::atan2(static_cast<double>(lam / bk), 0.0);
        const long double noise = std::exp(lam * static_cast<long double>(c.noise_power) / bk);
        sum += beta * a * noise / (a - bk) * dist.partial_fraction_weights()[k];
    }
    ClosedFormRate out;
    out.value = static_cast<double>(sum) / std::numbers::ln2;
    out.reference = ergodic_rate_quadrature(dist);
    out.rel_deviation = std::abs(out.value - out.reference) /
                        std::max(std::abs(out.reference), 1e-300);
    out.flagged = !(out.rel_deviation <= 1e-3);
    return out;
}

// HO-discounted throughput in bit/s given a spectral efficiency.
inline double ho_aware_rate(const ScenarioConfig& cfg, double mu, double speed,
                            double ergodic_rate_bps_hz) {
    const HoCost hc = ho_cost(cfg.ho_delay, mu, speed, cfg.mu_max, cfg.v_max);
    return cfg.bandwidth * ergodic_rate_bps_hz * (1.0 - hc.value);
}

enum class RateMethod { closed_form, quadrature, monte_carlo };

inline const char* to_string(RateMethod m) {
    switch (m) {
        case RateMethod::closed_form: return "closed_form";
        case RateMethod::quadrature: return "quadrature";
        default: return "monte_carlo";
    }
}

struct RateReport {
    double outage = 0.0;
    double ergodic_rate = 0.0;   // bit/s
    double ho_aware_rate = 0.0;  // bit/s
    double ho_cost = 0.0;
    bool ho_saturated = false;
    RateMethod method = RateMethod::quadrature;
    NoiseExponent noise_exponent = NoiseExponent::exact;
    ThresholdVariant threshold_variant = ThresholdVariant::shannon;
};

// Spectral efficiency of the worst-case (cell-midpoint) link, bit/s/Hz.
inline double worst_case_rate(const ScenarioConfig& cfg, double mu,
                              WorstCaseModel model = WorstCaseModel::half_line,
                              NoiseExponent noise = NoiseExponent::exact,
                              bool interference = true,
                              RateMethod method = RateMethod::quadrature) {
    const SinrDistribution dist(worst_case_coefficients(cfg, mu, model, interference), noise);
    if (method == RateMethod::closed_form) return ergodic_rate_closed(dist).value;
    return ergodic_rate_quadrature(dist);
}

// Closed-form outage and rates for a given link, with Monte Carlo left to
// the fading simulator.
inline RateReport analyze_link(const ScenarioConfig& cfg, const SinrCoefficients& regularized,
                               double mu, double speed,
                               NoiseExponent noise = NoiseExponent::exact,
                               ThresholdVariant threshold = ThresholdVariant::shannon) {
    const SinrDistribution dist(regularized, noise);
    const HoCost hc = ho_cost(cfg.ho_delay, mu, speed, cfg.mu_max, cfg.v_max);
    RateReport rep;
    rep.ho_cost = hc.value;
    rep.ho_saturated = hc.saturated;
    rep.noise_exponent = noise;
    rep.threshold_variant = threshold;
    rep.method = RateMethod::quadrature;
    const double spectral = ergodic_rate_quadrature(dist);
    rep.ergodic_rate = cfg.bandwidth * spectral;
    rep.ho_aware_rate = rep.ergodic_rate * (1.0 - hc.value);
    if (hc.saturated) {
        rep.outage = 1.0;  // zero HO-aware rate cannot meet any positive demand
    } else {
        const double gamma = sinr_threshold(cfg.rate_threshold, cfg.bandwidth, hc.value, threshold);
        rep.outage = outage_probability(dist, gamma);
    }
    return rep;
}

}  // namespace v2i
