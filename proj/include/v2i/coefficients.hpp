#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "v2i/geometry.hpp"
#include "v2i/scenario.hpp"

namespace v2i {

// Link-budget coefficients of one SINR instance. The received serving power
// is serving_coeff * chi and each interferer contributes
// interferer_coeffs[k] * chi_k, with chi ~ Exp(fading_rate) i.i.d.
struct SinrCoefficients {
    double serving_coeff = 0.0;             // W
    std::vector<double> interferer_coeffs;  // W, one per interfering BS
    double fading_rate = 1.0;
    double noise_power = 0.0;               // W
};

inline SinrCoefficients sinr_coefficients(const ScenarioConfig& cfg, const LinkGeometry& geom) {
    const double g = antenna_gain_factor(cfg) * cfg.tx_power;
    SinrCoefficients out;
    out.fading_rate = cfg.fading_rate;
    out.noise_power = cfg.noise_power;
    out.interferer_coeffs.reserve(geom.distances.size() - 1);
    for (std::size_t j = 0; j < geom.distances.size(); ++j) {
        const double coeff = g * std::pow(geom.distances[j], -cfg.path_loss_exp);
        if (static_cast<int>(j) == geom.serving_index)
            out.serving_coeff = coeff;
        else
            out.interferer_coeffs.push_back(coeff);
    }
    return out;
}

// Spreads (near-)equal interferer coefficients apart so that the
// partial-fraction expansions downstream stay well defined. A single sweep
// in ascending value order lifts every coefficient to at least
// prev * (1 + rel_jitter): the m-th member of a run of duplicates ends up
// multiplied by (1 + rel_jitter)^m = 1 + m * rel_jitter to working
// precision, distinct values pass through bit-identically, and re-running
// the sweep is a no-op because max() is idempotent. Total interference
// shifts by a relative O(rel_jitter).
inline SinrCoefficients regularize_coefficients(const SinrCoefficients& coeffs,
                                                double rel_jitter = 1e-9) {
    if (!(rel_jitter >= 1e-12 && rel_jitter <= 1e-6))
        throw std::invalid_argument("regularize_coefficients: rel_jitter outside [1e-12, 1e-6]");
    SinrCoefficients out = coeffs;
    auto& b = out.interferer_coeffs;
    const std::size_t n = b.size();
    if (n < 2) return out;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return b[i] < b[j]; });

    double prev = b[order[0]];
    for (std::size_t i = 1; i < n; ++i) {
        const double floor_value = prev * (1.0 + rel_jitter);
        prev = std::max(b[order[i]], floor_value);
        b[order[i]] = prev;
    }
    return out;
}

// Interferer enumeration for the worst-case (cell-midpoint) link.
//
// half_line: one interferer per ring, at along-road offsets (2k+1)/(2 mu),
//   k = 1..N-1. All coefficients are distinct by construction. This is the
//   enumeration the closed-form rate machinery and the planner assume.
// on_road: the physical on-road set for a vehicle at the central cell
//   midpoint: the second adjacent BS at the serving distance plus symmetric
//   pairs on both sides, truncated at the road ends. Produces duplicate
//   coefficients that only regularization (or Monte Carlo) can digest.
enum class WorstCaseModel { half_line, on_road };

inline double worst_case_serving_distance(const ScenarioConfig& cfg, double mu) {
    const double cross2 = cfg.bs_height * cfg.bs_height + cfg.bs_safety * cfg.bs_safety;
    return std::sqrt(cross2 + 1.0 / (4.0 * mu * mu));
}

inline SinrCoefficients worst_case_coefficients(const ScenarioConfig& cfg, double mu,
                                                WorstCaseModel model = WorstCaseModel::half_line,
                                                bool interference = true,
                                                bool regularized = true,
                                                double rel_jitter = 1e-9) {
    if (!(mu > 0.0)) throw std::domain_error("worst_case_coefficients: mu must be positive");
    const long rounded = std::lround(mu * cfg.road_length);
    const int n = rounded < 2 ? 2 : static_cast<int>(rounded);
    const double cross2 = cfg.bs_height * cfg.bs_height + cfg.bs_safety * cfg.bs_safety;
    const double g = antenna_gain_factor(cfg) * cfg.tx_power;
    const double alpha = cfg.path_loss_exp;

    auto ring_distance = [&](int k) {
        const double off = (2.0 * k + 1.0) / (2.0 * mu);
        return std::sqrt(cross2 + off * off);
    };

    SinrCoefficients out;
    out.fading_rate = cfg.fading_rate;
    out.noise_power = cfg.noise_power;
    out.serving_coeff = g * std::pow(ring_distance(0), -alpha);
    if (interference) {
        if (model == WorstCaseModel::half_line) {
            for (int k = 1; k < n; ++k)
                out.interferer_coeffs.push_back(g * std::pow(ring_distance(k), -alpha));
        } else {
            const int mid = n / 2;  // midpoint between BS mid-1 and BS mid
            out.interferer_coeffs.push_back(out.serving_coeff);  // opposite adjacent BS
            for (int k = 1; k <= mid - 1; ++k)
                out.interferer_coeffs.push_back(g * std::pow(ring_distance(k), -alpha));
            for (int k = 1; k <= n - 1 - mid; ++k)
                out.interferer_coeffs.push_back(g * std::pow(ring_distance(k), -alpha));
        }
    }
    return regularized ? regularize_coefficients(out, rel_jitter) : out;
}

}  // namespace v2i
