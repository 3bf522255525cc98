#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "v2i/experiments.hpp"
#include "v2i/fading_sim.hpp"
#include "v2i/flow_optimizer.hpp"
#include "v2i/rates.hpp"
#include "v2i/scenario.hpp"
#include "v2i/special_functions.hpp"

namespace v2i {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

namespace detail {

// Total probability mass of a distribution, integrated on the compactified
// axis t = z / (1 + z) so the infinite tail needs no cutoff.
inline double pdf_mass(const SinrDistribution& dist) {
    auto integrand = [&dist](double t) {
        const double u = 1.0 - t;
        const double z = t / u;
        return dist.pdf(z) / (u * u);
    };
    std::vector<long double> brk;
    for (int i = 0; i <= 64; ++i) brk.push_back(static_cast<long double>(i) / 64.0L);
    // 1e-7: regularized duplicate weights floor the error estimate near 1e-8
    return static_cast<double>(integrate_adaptive(integrand, brk, 1e-7L).value);
}

inline void add_check(ValidationReport& rep, std::string name, bool passed, double measured,
                      double tolerance, std::string detail = {}) {
    rep.checks.push_back(
        {std::move(name), passed, measured, tolerance, std::move(detail)});
}

}  // namespace detail

// Cross-checks every closed form against its independent evaluation route:
// quadrature against partial fractions, Monte Carlo against both, plus the
// discriminator runs that justify the default variant flags. `trials`
// scales every Monte Carlo leg; 1e5 gives comfortable margins.
inline ValidationReport validate_all(std::uint64_t trials, std::uint64_t seed, int shards = 1) {
    ValidationReport rep;
    const ScenarioConfig defaults;

    // Reference constants, checked against independently computed values.
    {
        const double gamma = antenna_gain_factor(defaults);
        const double expect = 1.2905745254293538e-4;
        detail::add_check(rep, "antenna_gain_reference",
                          std::abs(gamma - expect) <= 1e-12 * expect, gamma, expect);
        const double dmax = worst_case_serving_distance(defaults, 0.002);
        const double dexpect = 250.1779366770779;
        detail::add_check(rep, "worst_case_distance",
                          std::abs(dmax - dexpect) <= 1e-12 * dexpect, dmax, dexpect);
    }

    // Distribution sanity over randomized coefficient sets (noise-free, so
    // the partial-fraction forms are exact) including duplicate-heavy ones.
    {
        std::mt19937_64 gen(seed ^ 0xabcdef);
        std::uniform_real_distribution<double> logb(-3.0, 3.0);
        std::uniform_real_distribution<double> logr(-0.35, 0.35);
        double worst_mass = 0.0, worst_diff = 0.0, worst_mono = 0.0;
        for (int set = 0; set < 20; ++set) {
            SinrCoefficients c;
            c.serving_coeff = std::exp(logb(gen));
            c.fading_rate = 1.0;
            c.noise_power = 0.0;
            const int n = 1 + static_cast<int>(gen() % 6);
            for (int k = 0; k < n; ++k) c.interferer_coeffs.push_back(std::exp(logb(gen)));
            // keep distinct base values well separated: duplicate pairs are
            // the structure under test, accidental near-collisions on top of
            // them would leave the partial fractions with nothing to say
            std::sort(c.interferer_coeffs.begin(), c.interferer_coeffs.end());
            for (std::size_t k = 1; k < c.interferer_coeffs.size(); ++k)
                c.interferer_coeffs[k] =
                    std::max(c.interferer_coeffs[k], 1.35 * c.interferer_coeffs[k - 1]);
            if (set % 3 == 0)  // duplicate pairs, the worst-case geometry signature
                for (int k = 0; k < n; ++k)
                    c.interferer_coeffs.push_back(c.interferer_coeffs[k]);
            // pin the interference sum within a factor of three of the
            // serving coefficient so the probe points z in [0.1, 10] stay in
            // the body of the distribution
            double total = 0.0;
            for (double b : c.interferer_coeffs) total += b;
            const double scale = c.serving_coeff * std::exp(logr(gen)) / total;
            for (double& b : c.interferer_coeffs) b *= scale;
            const SinrDistribution dist(regularize_coefficients(c, 1e-6),
                                        NoiseExponent::exact);
            worst_mass = std::max(worst_mass, std::abs(detail::pdf_mass(dist) - 1.0));
            for (double z : {0.1, 1.0, 10.0}) {
                const double h = std::max(1e-4, 1e-3 * z);
                const double fd = (dist.cdf(z + h) - dist.cdf(z - h)) / (2.0 * h);
                const double pdf = dist.pdf(z);
                worst_diff = std::max(worst_diff, std::abs(fd - pdf) / std::max(pdf, 1e-12));
            }
            double prev = dist.cdf(0.0);
            for (int i = 1; i <= 1000; ++i) {
                const double z = std::pow(10.0, -3.0 + 6.0 * i / 1000.0);
                const double cur = dist.cdf(z);
                worst_mono = std::min(worst_mono, cur - prev);
                prev = cur;
            }
        }
        detail::add_check(rep, "pdf_normalization", worst_mass <= 1e-6, worst_mass, 1e-6);
        detail::add_check(rep, "cdf_derivative_consistency", worst_diff <= 1e-6, worst_diff,
                          1e-6);
        // monotone up to the long-double cancellation floor of the
        // regularized-duplicate weights
        detail::add_check(rep, "cdf_monotone", worst_mono >= -1e-10, worst_mono, 1e-10);
    }

    // Equal-coefficient limit against the analytic ratio distribution.
    {
        SinrCoefficients c{1.0, {1.0}, 1.0, 0.0};
        const SinrDistribution dist(regularize_coefficients(c), NoiseExponent::exact);
        double worst = 0.0;
        for (double z : {0.1, 0.5, 1.0, 4.0, 30.0}) {
            worst = std::max(worst, std::abs(dist.cdf(z) - z / (1.0 + z)));
            worst = std::max(worst,
                             std::abs(dist.pdf(z) - 1.0 / ((1.0 + z) * (1.0 + z))));
        }
        const double rate = ergodic_rate_quadrature(dist);
        worst = std::max(worst, std::abs(rate - 1.0 / std::numbers::ln2));
        detail::add_check(rep, "ratio_distribution_oracle", worst <= 1e-7, worst, 1e-7);
    }

    // Closed CDF against the integral of the closed PDF.
    {
        const auto coeffs = worst_case_coefficients(defaults, 0.002, WorstCaseModel::on_road);
        const SinrDistribution dist(coeffs, NoiseExponent::exact);
        double worst = 0.0;
        for (double z : {0.1, 1.0, 10.0}) {
            std::vector<long double> brk;
            for (int i = 0; i <= 32; ++i)
                brk.push_back(static_cast<long double>(z) * i / 32.0L);
            const double integral =
                static_cast<double>(integrate_adaptive(
                                        [&dist](double x) { return dist.pdf(x); }, brk, 1e-11L)
                                        .value);
            worst = std::max(worst, std::abs(dist.cdf(z) - integral));
        }
        detail::add_check(rep, "cdf_equals_pdf_integral", worst <= 1e-8, worst, 1e-8);
    }

    // Noise-variant discriminator: with noise comparable to the interferer
    // coefficients only the exact treatment tracks the simulation.
    {
        SinrCoefficients c{1.0, {0.5, 0.25, 0.1}, 1.0, 0.3};
        SimSpec spec{trials, seed, c, 1.0, shards};
        const SimResult mc = simulate(spec);
        double err[3] = {0.0, 0.0, 0.0};
        const NoiseExponent variants[3] = {NoiseExponent::exact, NoiseExponent::negative,
                                           NoiseExponent::positive};
        for (int v = 0; v < 3; ++v) {
            const SinrDistribution dist(c, variants[v]);
            err[v] = std::abs(dist.cdf(1.0) - mc.cdf_p[std::lower_bound(mc.cdf_z.begin(),
                                                                        mc.cdf_z.end(), 1.0) -
                                                       mc.cdf_z.begin()]);
        }
        std::ostringstream oss;
        oss << "|cdf-mc| exact=" << err[0] << " negative=" << err[1] << " positive=" << err[2];
        const double budget = 3.0 * mc.outage_stderr + 2e-3;
        detail::add_check(rep, "noise_variant_discriminator",
                          err[0] < err[1] && err[1] < err[2] && err[0] <= budget, err[0], budget,
                          oss.str());
    }

    // Threshold-variant discriminator against the literal HO-aware outage.
    // Run where the SINR threshold is small: dropping the -1 then shifts the
    // threshold by a third and the outage by several points.
    {
        const double mu = 0.002, speed = 10.0;
        const auto mc = simulate_ho_outage(defaults, mu, speed, trials, seed + 1, shards);
        const HoCost hc = ho_cost(defaults.ho_delay, mu, speed, defaults.mu_max, defaults.v_max);
        const SinrDistribution dist(worst_case_coefficients(defaults, mu), NoiseExponent::exact);
        const double shannon = outage_probability(
            dist, sinr_threshold(defaults.rate_threshold, defaults.bandwidth, hc.value,
                                 ThresholdVariant::shannon));
        const double pow2 = outage_probability(
            dist, sinr_threshold(defaults.rate_threshold, defaults.bandwidth, hc.value,
                                 ThresholdVariant::pow2));
        std::ostringstream oss;
        oss << "mc=" << mc.outage << " shannon=" << shannon << " pow2=" << pow2;
        detail::add_check(rep, "threshold_variant_discriminator",
                          std::abs(shannon - mc.outage) < std::abs(pow2 - mc.outage) &&
                              std::abs(shannon - mc.outage) <= 0.01,
                          std::abs(shannon - mc.outage), 0.01, oss.str());
    }

    // Mobile reference point: closed-form outage against Monte Carlo.
    {
        ScenarioConfig cfg = defaults;
        cfg.rate_threshold = 1e8;
        cfg.mu_max = 0.02;
        const double mu = 0.004, speed = 30.0;
        const auto mc = simulate_ho_outage(cfg, mu, speed, trials, seed + 5, shards);
        const HoCost hc = ho_cost(cfg.ho_delay, mu, speed, cfg.mu_max, cfg.v_max);
        const SinrDistribution dist(worst_case_coefficients(cfg, mu), NoiseExponent::exact);
        const double closed = outage_probability(
            dist, sinr_threshold(cfg.rate_threshold, cfg.bandwidth, hc.value));
        detail::add_check(rep, "outage_reference_point",
                          std::abs(closed - mc.outage) <= 0.01, std::abs(closed - mc.outage),
                          0.01);
    }

    // Spectral efficiency: quadrature against Monte Carlo.
    {
        const auto coeffs = worst_case_coefficients(defaults, 0.002);
        const SinrDistribution dist(coeffs, NoiseExponent::exact);
        const double quad = ergodic_rate_quadrature(dist);
        SimSpec spec{trials, seed + 2,
                     worst_case_coefficients(defaults, 0.002, WorstCaseModel::half_line, true,
                                             false),
                     1.0, shards};
        const SimResult mc = simulate(spec);
        const double rel = std::abs(quad - mc.mean_log_rate) / mc.mean_log_rate;
        detail::add_check(rep, "ergodic_rate_mc_agreement", rel <= 0.01, rel, 0.01);
    }

    // The quadrature route against the well-posed part of the closed rate.
    {
        SinrCoefficients c{1.0, {0.5, 0.2}, 1.0, 0.0};
        const SinrDistribution dist(c, NoiseExponent::exact);
        long double analytic = 0.0L;
        for (std::size_t k = 0; k < c.interferer_coeffs.size(); ++k) {
            const long double b = c.interferer_coeffs[k];
            analytic += dist.partial_fraction_weights()[k] * (1.0L / (1.0L - b)) *
                        std::log(1.0L / b);
        }
        const double expect = static_cast<double>(analytic) / std::numbers::ln2;
        const double quad = ergodic_rate_quadrature(dist);
        const double rel = std::abs(quad - expect) / expect;
        detail::add_check(rep, "quadrature_partial_fraction_identity", rel <= 1e-7, rel, 1e-7);

        const ClosedFormRate closed = ergodic_rate_closed(dist);
        std::ostringstream oss;
        oss << "printed=" << closed.value << " quadrature=" << closed.reference;
        detail::add_check(rep, "printed_rate_flagged",
                          closed.flagged && closed.rel_deviation > 1e-3, closed.rel_deviation,
                          1e-3, oss.str());
    }

    // Inverse error function and the collision-constraint chain.
    {
        double worst = 0.0;
        for (double p = -0.999; p < 1.0; p += 0.0405)
            worst = std::max(worst, std::abs(std::erf(erf_inv(p)) - p));
        detail::add_check(rep, "erf_inv_roundtrip", worst <= 1e-12, worst, 1e-12);

        double worst_eps = 0.0;
        for (double eps : {1e-3, 1e-2, 1e-1, 0.5}) {
            const double v = v_safe(eps, defaults.processing_time, defaults.spacing_mu,
                                    defaults.spacing_sigma);
            worst_eps = std::max(worst_eps,
                                 std::abs(crash_probability(v, defaults.processing_time,
                                                            defaults.spacing_mu,
                                                            defaults.spacing_sigma) -
                                          eps));
        }
        detail::add_check(rep, "crash_roundtrip", worst_eps <= 1e-10, worst_eps, 1e-10);
    }

    // Traffic flow closed form against log-normal sampling.
    {
        std::mt19937_64 gen(seed ^ 0x5eed);
        std::lognormal_distribution<double> spacing(defaults.spacing_mu, defaults.spacing_sigma);
        double sum = 0.0, comp = 0.0;
        const int n = 1'000'000;
        for (int i = 0; i < n; ++i) detail::neumaier_add(sum, comp, 1.0 / spacing(gen));
        const double v = 20.0;
        const double mc = v * (sum + comp) / n;
        const double closed = traffic_flow(v, defaults.spacing_mu, defaults.spacing_sigma);
        const double rel = std::abs(mc - closed) / closed;
        detail::add_check(rep, "traffic_flow_sampling", rel <= 5e-3, rel, 5e-3);
    }

    // Golden-section search on a known quadratic.
    {
        const auto res = golden_section_maximize(
            [](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-8);
        const int bound =
            static_cast<int>(std::ceil(std::log(1.0 / 1e-8) / std::log(1.6180339887))) + 2;
        std::ostringstream oss;
        oss << "iterations=" << res.iterations << " bound=" << bound;
        detail::add_check(rep, "golden_section_quadratic",
                          std::abs(res.argmax - 0.3) <= 1e-8 && res.iterations <= bound,
                          std::abs(res.argmax - 0.3), 1e-8, oss.str());
    }

    // Determinism: identical seeds and different shard counts must agree bitwise.
    {
        SinrCoefficients c{1.0, {0.5, 0.5, 0.125}, 1.0, 0.01};
        SimSpec one{std::min<std::uint64_t>(trials, 50'000), seed + 3, c, 1.0, 1};
        SimSpec eight = one;
        eight.shards = 8;
        const SimResult r1 = simulate(one);
        const SimResult r1b = simulate(one);
        const SimResult r8 = simulate(eight);
        const bool same = r1.empirical_outage == r8.empirical_outage &&
                          r1.mean_log_rate == r8.mean_log_rate &&
                          r1.cdf_p == r8.cdf_p &&
                          r1.empirical_outage == r1b.empirical_outage &&
                          r1.mean_log_rate == r1b.mean_log_rate;
        detail::add_check(rep, "simulation_determinism", same,
                          std::abs(r1.mean_log_rate - r8.mean_log_rate), 0.0);
    }

    // Duplicate interferers: raw simulation against the regularized forms.
    {
        SinrCoefficients c{2.0, {0.7, 0.7}, 1.0, 0.0};
        SimSpec spec{trials, seed + 4, c, 1.5, shards};
        const SimResult mc = simulate(spec);
        const SinrDistribution dist(regularize_coefficients(c), NoiseExponent::exact);
        const double diff = std::abs(dist.cdf(1.5) - mc.empirical_outage);
        const double budget = 3.0 * mc.outage_stderr + 1e-3;
        detail::add_check(rep, "duplicate_interferers_oracle", diff <= budget, diff, budget);
    }

    // Corrupted coefficients must be rejected loudly.
    {
        bool rejected = false;
        std::string msg;
        try {
            SinrCoefficients bad{1.0, {0.5, -0.25}, 1.0, 0.0};
            SinrDistribution dist(bad);
        } catch (const std::invalid_argument& e) {
            rejected = true;
            msg = e.what();
        }
        detail::add_check(rep, "corrupted_coefficients_rejected", rejected, rejected ? 1 : 0, 1,
                          msg);
    }

    // Handoff cost arithmetic and the saturated corner.
    {
        const HoCost mid = ho_cost(3.0, 0.002, 20.0, 0.01, 30.0);
        const HoCost corner = ho_cost(3.0, 0.01, 30.0, 0.01, 30.0);
        detail::add_check(rep, "ho_cost_examples",
                          mid.value == 0.4 && !mid.saturated && corner.saturated &&
                              corner.value == 1.0 && corner.raw == 3.0,
                          mid.value, 0.4);
    }

    // Planner identities on the default scenario.
    {
        const PlanResult plan = optimize_density(defaults);
        const auto bounds = optimal_speed(defaults, plan.mu_star);
        const bool ok = plan.feasible && bounds &&
                        plan.v_star == bound_speed(*bounds) &&
                        plan.q_star == traffic_flow(plan.v_star, defaults.spacing_mu,
                                                    defaults.spacing_sigma);
        detail::add_check(rep, "plan_identities", ok, plan.v_star, 0.0,
                          std::string("binding=") + (bounds ? to_string(bounds->binding) : "-"));
    }

    return rep;
}

inline std::string format_report(const ValidationReport& rep) {
    std::ostringstream oss;
    for (const auto& c : rep.checks) {
        oss << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  measured=" << c.measured
            << " tolerance=" << c.tolerance;
        if (!c.detail.empty()) oss << "  (" << c.detail << ")";
        oss << '\n';
    }
    oss << (rep.all_passed() ? "validation: all checks passed" : "validation: FAILURES present")
        << '\n';
    return oss.str();
}

}  // namespace v2i
