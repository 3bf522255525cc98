#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "v2i/fading_sim.hpp"
#include "v2i/flow_optimizer.hpp"
#include "v2i/rates.hpp"
#include "v2i/scenario.hpp"

namespace v2i {

// One experiment per published figure family.
enum class Experiment {
    outage_vs_mu,     // HO-aware rate outage over BS density, several speeds
    capacity_vs_mu,   // HO-aware throughput over BS density, several speeds
    vdata_vs_mu,      // data-rate speed bound over BS density, two path-loss exponents
    flow_vs_rth,      // optimized traffic flow over the rate threshold
    flow_vs_epsilon,  // optimized traffic flow over the crash tolerance
    flow_vs_mu,       // traffic flow over fixed BS density, with/without interference
};

inline const char* to_string(Experiment e) {
    switch (e) {
        case Experiment::outage_vs_mu: return "outage_vs_mu";
        case Experiment::capacity_vs_mu: return "capacity_vs_mu";
        case Experiment::vdata_vs_mu: return "vdata_vs_mu";
        case Experiment::flow_vs_rth: return "flow_vs_rth";
        case Experiment::flow_vs_epsilon: return "flow_vs_epsilon";
        default: return "flow_vs_mu";
    }
}

inline std::optional<Experiment> parse_experiment(const std::string& name) {
    for (Experiment e : {Experiment::outage_vs_mu, Experiment::capacity_vs_mu,
                         Experiment::vdata_vs_mu, Experiment::flow_vs_rth,
                         Experiment::flow_vs_epsilon, Experiment::flow_vs_mu})
        if (name == to_string(e)) return e;
    return std::nullopt;
}

struct SweepSpec {
    Experiment experiment = Experiment::outage_vs_mu;
    std::vector<double> grid;
    ScenarioConfig base;
    std::uint64_t trials = 0;  // Monte Carlo budget per grid point, 0 disables
    std::uint64_t seed = 0;
    int shards = 1;
    RateModelOptions rate;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Per-grid-point stream so rows stay reproducible independently of how many
// variants share the point.
inline std::uint64_t point_seed(std::uint64_t seed, std::size_t grid_index) {
    return splitmix64(seed ^ (0x9E3779B97F4A7C15ull * (grid_index + 1)));
}

struct CsvRow {
    double grid = 0.0;
    std::string variant;
    std::string analytic, mc, mc_stderr, feasible, binding, mu_star, v_star, q_star;
};

inline void write_row(std::string& out, const CsvRow& r) {
    out += fmt(r.grid);
    for (const std::string* f :
         {&r.variant, &r.analytic, &r.mc, &r.mc_stderr, &r.feasible, &r.binding, &r.mu_star,
          &r.v_star, &r.q_star}) {
        out += ',';
        out += *f;
    }
    out += '\n';
}

}  // namespace detail

inline void validate_sweep(const SweepSpec& spec) {
    if (spec.grid.empty()) throw std::invalid_argument("sweep: empty grid");
    for (std::size_t i = 0; i + 1 < spec.grid.size(); ++i)
        if (!(spec.grid[i] < spec.grid[i + 1]))
            throw std::invalid_argument("sweep: grid must be strictly increasing");
    spec.base.validate();
    const bool needs_mc = spec.experiment == Experiment::outage_vs_mu ||
                          spec.experiment == Experiment::capacity_vs_mu ||
                          spec.experiment == Experiment::flow_vs_rth;
    if (needs_mc && spec.trials < 1)
        throw std::invalid_argument("sweep: this experiment requires a Monte Carlo budget");
}

// Runs one experiment and renders the fixed-schema CSV document:
//   grid,variant,analytic,mc,mc_stderr,feasible,binding,mu_star,v_star,q_star
// Rows appear in grid-major order within each variant; infeasible points are
// emitted, not dropped. Byte-stable for a fixed (spec, seed, shards).
inline std::string run_sweep(const SweepSpec& spec) {
    validate_sweep(spec);
    std::string out = "grid,variant,analytic,mc,mc_stderr,feasible,binding,mu_star,v_star,q_star\n";
    const ScenarioConfig& base = spec.base;
    using detail::CsvRow;
    using detail::fmt;

    switch (spec.experiment) {
        case Experiment::outage_vs_mu: {
            for (double speed : {10.0, 20.0, 30.0}) {
                for (std::size_t i = 0; i < spec.grid.size(); ++i) {
                    const double mu = spec.grid[i];
                    CsvRow row{mu, "v=" + fmt(speed)};
                    const HoCost hc =
                        ho_cost(base.ho_delay, mu, speed, base.mu_max, base.v_max);
                    if (hc.saturated) {
                        row.analytic = fmt(1.0);
                        row.mc = fmt(1.0);
                        row.mc_stderr = fmt(0.0);
                    } else {
                        const auto coeffs = worst_case_coefficients(base, mu, spec.rate.geometry);
                        const SinrDistribution dist(coeffs, spec.rate.noise);
                        const double gamma =
                            sinr_threshold(base.rate_threshold, base.bandwidth, hc.value);
                        row.analytic = fmt(outage_probability(dist, gamma));
                        const auto mc =
                            simulate_ho_outage(base, mu, speed, spec.trials,
                                               detail::point_seed(spec.seed, i), spec.shards,
                                               spec.rate.geometry);
                        row.mc = fmt(mc.outage);
                        row.mc_stderr = fmt(std::sqrt(
                            std::max(0.0, mc.outage * (1.0 - mc.outage) /
                                              static_cast<double>(spec.trials))));
                    }
                    detail::write_row(out, row);
                }
            }
            break;
        }
        case Experiment::capacity_vs_mu: {
            std::map<std::size_t, SimResult> cache;  // per grid point, shared across speeds
            for (double speed : {10.0, 20.0, 30.0}) {
                for (std::size_t i = 0; i < spec.grid.size(); ++i) {
                    const double mu = spec.grid[i];
                    CsvRow row{mu, "v=" + fmt(speed)};
                    const HoCost hc =
                        ho_cost(base.ho_delay, mu, speed, base.mu_max, base.v_max);
                    const auto coeffs = worst_case_coefficients(base, mu, spec.rate.geometry);
                    const SinrDistribution dist(coeffs, spec.rate.noise);
                    const double spectral = ergodic_rate_quadrature(dist, spec.rate.quad_tol);
                    row.analytic = fmt(base.bandwidth * spectral * (1.0 - hc.value));
                    auto it = cache.find(i);
                    if (it == cache.end()) {
                        SimSpec sim{spec.trials, detail::point_seed(spec.seed, i),
                                    worst_case_coefficients(base, mu, spec.rate.geometry, true,
                                                            /*regularized=*/false),
                                    1.0, spec.shards};
                        it = cache.emplace(i, simulate(sim)).first;
                    }
                    row.mc = fmt(base.bandwidth * it->second.mean_log_rate * (1.0 - hc.value));
                    row.mc_stderr =
                        fmt(base.bandwidth * it->second.mean_log_rate_stderr * (1.0 - hc.value));
                    detail::write_row(out, row);
                }
            }
            break;
        }
        case Experiment::vdata_vs_mu: {
            for (double alpha : {3.0, 4.0}) {
                ScenarioConfig cfg = base;
                cfg.path_loss_exp = alpha;
                for (double mu : spec.grid) {
                    CsvRow row{mu, "alpha=" + fmt(alpha)};
                    const auto vd = v_data(cfg, mu, spec.rate);
                    row.feasible = vd ? "1" : "0";
                    if (vd) row.analytic = fmt(*vd);
                    detail::write_row(out, row);
                }
            }
            break;
        }
        case Experiment::flow_vs_rth: {
            for (double alpha : {3.0, 4.0}) {
                for (std::size_t i = 0; i < spec.grid.size(); ++i) {
                    ScenarioConfig cfg = base;
                    cfg.path_loss_exp = alpha;
                    cfg.rate_threshold = spec.grid[i];
                    CsvRow row{spec.grid[i], "alpha=" + fmt(alpha)};
                    OptimizeOptions opts;
                    opts.rate = spec.rate;
                    const PlanResult plan = optimize_density(cfg, opts);
                    row.feasible = plan.feasible ? "1" : "0";
                    row.mu_star = fmt(plan.mu_star);
                    if (plan.feasible) {
                        row.analytic = fmt(plan.q_star);
                        row.binding = to_string(plan.binding);
                        row.v_star = fmt(plan.v_star);
                        row.q_star = fmt(plan.q_star);
                        // Monte Carlo route: re-derive the data speed bound from the
                        // simulated spectral efficiency at mu*.
                        SimSpec sim{spec.trials, detail::point_seed(spec.seed, i),
                                    worst_case_coefficients(cfg, plan.mu_star,
                                                            spec.rate.geometry, true, false),
                                    1.0, spec.shards};
                        const SimResult mc = simulate(sim);
                        const double supply = cfg.bandwidth * mc.mean_log_rate;
                        const double vdata_mc =
                            (1.0 - cfg.rate_threshold / supply) /
                            (cfg.normalized_ho_delay() * plan.mu_star);
                        const double vsafe = v_safe(cfg.crash_tolerance, cfg.processing_time,
                                                    cfg.spacing_mu, cfg.spacing_sigma);
                        const double v_mc =
                            vdata_mc < 0.0
                                ? 0.0
                                : std::min({vsafe, cfg.v_max, vdata_mc});
                        row.mc = fmt(traffic_flow(v_mc, cfg.spacing_mu, cfg.spacing_sigma));
                        double sensitivity = 0.0;
                        if (v_mc == vdata_mc && vdata_mc >= 0.0)
                            sensitivity = cfg.rate_threshold /
                                          (cfg.bandwidth * mc.mean_log_rate * mc.mean_log_rate) /
                                          (cfg.normalized_ho_delay() * plan.mu_star) *
                                          std::exp((cfg.spacing_sigma * cfg.spacing_sigma -
                                                    2.0 * cfg.spacing_mu) /
                                                   2.0);
                        row.mc_stderr = fmt(sensitivity * mc.mean_log_rate_stderr);
                    }
                    detail::write_row(out, row);
                }
            }
            break;
        }
        case Experiment::flow_vs_epsilon: {
            for (double tau : {4e-3, 6e-3}) {
                ScenarioConfig cfg = base;
                cfg.processing_time = tau;
                OptimizeOptions opts;
                opts.rate = spec.rate;
                const PlanResult plan = optimize_density(cfg, opts);
                for (double eps : spec.grid) {
                    CsvRow row{eps, "tau=" + fmt(tau)};
                    row.feasible = plan.feasible ? "1" : "0";
                    row.mu_star = fmt(plan.mu_star);
                    if (plan.feasible) {
                        const double vs =
                            v_safe(eps, tau, cfg.spacing_mu, cfg.spacing_sigma);
                        const auto vd = v_data(cfg, plan.mu_star, spec.rate);
                        const double v = std::min({vs, *vd, cfg.v_max});
                        row.binding = v == vs              ? "safe"
                                      : v == *vd           ? "data"
                                                           : "max";
                        row.v_star = fmt(v);
                        const double q = traffic_flow(v, cfg.spacing_mu, cfg.spacing_sigma);
                        row.q_star = fmt(q);
                        row.analytic = fmt(q);
                    }
                    detail::write_row(out, row);
                }
            }
            break;
        }
        case Experiment::flow_vs_mu: {
            for (double dsafe : {5.0, 15.0}) {
                for (bool interference : {true, false}) {
                    ScenarioConfig cfg = base;
                    cfg.bs_safety = dsafe;
                    RateModelOptions rate = spec.rate;
                    rate.interference = interference;
                    const double vs = v_safe(cfg.crash_tolerance, cfg.processing_time,
                                             cfg.spacing_mu, cfg.spacing_sigma);
                    for (double mu : spec.grid) {
                        CsvRow row{mu, "dsafe=" + fmt(dsafe) +
                                           (interference ? ";intf=on" : ";intf=off")};
                        const auto vd = v_data(cfg, mu, rate);
                        if (!vd) {
                            row.feasible = "0";
                            row.analytic = fmt(0.0);  // no admissible speed, no flow
                            row.q_star = fmt(0.0);
                        } else {
                            row.feasible = "1";
                            const double v = std::min({vs, *vd, cfg.v_max});
                            row.binding = v == vs              ? "safe"
                                          : v == *vd           ? "data"
                                                               : "max";
                            row.v_star = fmt(v);
                            const double q = traffic_flow(v, cfg.spacing_mu, cfg.spacing_sigma);
                            row.q_star = fmt(q);
                            row.analytic = fmt(q);
                        }
                        detail::write_row(out, row);
                    }
                }
            }
            break;
        }
    }
    return out;
}

}  // namespace v2i
