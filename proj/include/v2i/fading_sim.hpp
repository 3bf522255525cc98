#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <vector>

#include "v2i/coefficients.hpp"
#include "v2i/philox.hpp"
#include "v2i/rates.hpp"
#include "v2i/scenario.hpp"

namespace v2i {

// Monte Carlo spec for one coefficient set. Duplicate interferer
// coefficients are perfectly fine here; that is what makes the simulator an
// independent check on the partial-fraction forms.
struct SimSpec {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    SinrCoefficients coeffs;
    double gamma_th = 1.0;
    int shards = 1;
};

struct SimResult {
    double empirical_outage = 0.0;
    double outage_stderr = 0.0;
    double mean_log_rate = 0.0;  // E[log2(1 + Z)], bit/s/Hz
    double mean_log_rate_stderr = 0.0;
    std::vector<double> cdf_z;   // fixed evaluation grid
    std::vector<double> cdf_p;   // empirical P(Z <= z)
    std::uint64_t trials = 0;
};

// 200 log-spaced evaluation points spanning [1e-3, 1e3].
inline const std::vector<double>& sim_cdf_grid() {
    static const std::vector<double> grid = [] {
        std::vector<double> g(200);
        for (int i = 0; i < 200; ++i) g[i] = std::pow(10.0, -3.0 + 6.0 * i / 199.0);
        return g;
    }();
    return grid;
}

namespace detail {

// Per-block partial sums. Trials are accumulated in fixed blocks of 4096 so
// that the floating-point reduction never depends on how trials are dealt
// out to shards: every shard produces bit-identical block sums, and the
// final reduction walks the blocks in index order.
inline constexpr std::uint64_t kSimBlock = 4096;

struct BlockSums {
    double log_sum = 0.0;
    double log_sumsq = 0.0;
};

struct ShardCounts {
    std::uint64_t outage = 0;
    std::vector<std::uint64_t> histogram;
};

inline void neumaier_add(double& sum, double& comp, double term) {
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
        comp += (sum - t) + term;
    else
        comp += (term - t) + sum;
    sum = t;
}

}  // namespace detail

inline void validate_sim_coeffs(const SinrCoefficients& c) {
    if (!(c.serving_coeff > 0.0))
        throw std::invalid_argument("simulate: serving coefficient must be positive");
    if (!(c.fading_rate > 0.0))
        throw std::invalid_argument("simulate: fading rate must be positive");
    if (c.noise_power < 0.0) throw std::invalid_argument("simulate: negative noise power");
    for (double b : c.interferer_coeffs)
        if (!(b > 0.0))
            throw std::invalid_argument("simulate: interferer coefficients must be positive");
    if (c.interferer_coeffs.empty() && !(c.noise_power > 0.0))
        throw std::invalid_argument("simulate: no interferers and no noise");
}

// One fading draw of the SINR for a given trial stream.
inline double draw_sinr(TrialRng& rng, const SinrCoefficients& c) {
    const double chi = rng.next_exponential(c.fading_rate);
    double denom = c.noise_power;
    for (double b : c.interferer_coeffs) denom += b * rng.next_exponential(c.fading_rate);
    return c.serving_coeff * chi / denom;
}

inline SimResult simulate(const SimSpec& spec) {
    if (spec.trials < 1 || spec.trials > (std::uint64_t{1} << 40))
        throw std::invalid_argument("simulate: trials must lie in [1, 2^40]");
    if (spec.shards < 1 || spec.shards > 4096)
        throw std::invalid_argument("simulate: shards must lie in [1, 4096]");
    if (!(spec.gamma_th >= 0.0)) throw std::invalid_argument("simulate: negative threshold");
    validate_sim_coeffs(spec.coeffs);

    const auto& grid = sim_cdf_grid();
    const std::uint64_t nblocks = (spec.trials + detail::kSimBlock - 1) / detail::kSimBlock;
    std::vector<detail::BlockSums> blocks(nblocks);
    std::vector<detail::ShardCounts> counts(spec.shards);

    auto run_shard = [&](int shard) {
        auto& local = counts[shard];
        local.histogram.assign(grid.size(), 0);
        const std::uint64_t b_lo = nblocks * shard / spec.shards;
        const std::uint64_t b_hi = nblocks * (shard + 1) / spec.shards;
        for (std::uint64_t blk = b_lo; blk < b_hi; ++blk) {
            const std::uint64_t t_lo = blk * detail::kSimBlock;
            const std::uint64_t t_hi = std::min(spec.trials, t_lo + detail::kSimBlock);
            double sum = 0.0, comp = 0.0, sumsq = 0.0, compsq = 0.0;
            for (std::uint64_t trial = t_lo; trial < t_hi; ++trial) {
                TrialRng rng(spec.seed, trial);
                const double z = draw_sinr(rng, spec.coeffs);
                if (z <= spec.gamma_th) ++local.outage;
                const auto it = std::lower_bound(grid.begin(), grid.end(), z);
                if (it != grid.end()) ++local.histogram[it - grid.begin()];
                const double w = std::log2(1.0 + z);
                detail::neumaier_add(sum, comp, w);
                detail::neumaier_add(sumsq, compsq, w * w);
            }
            blocks[blk] = {sum + comp, sumsq + compsq};
        }
    };

    if (spec.shards == 1) {
        run_shard(0);
    } else {
        std::vector<std::future<void>> tasks;
        tasks.reserve(spec.shards);
        for (int s = 0; s < spec.shards; ++s)
            tasks.push_back(std::async(std::launch::async, run_shard, s));
        for (auto& t : tasks) t.get();
    }

    double sum = 0.0, comp = 0.0, sumsq = 0.0, compsq = 0.0;
    for (const auto& blk : blocks) {
        detail::neumaier_add(sum, comp, blk.log_sum);
        detail::neumaier_add(sumsq, compsq, blk.log_sumsq);
    }
    const double total = sum + comp;
    const double total_sq = sumsq + compsq;
    std::uint64_t outage = 0;
    std::vector<std::uint64_t> histogram(grid.size(), 0);
    for (const auto& c : counts) {
        outage += c.outage;
        for (std::size_t i = 0; i < grid.size(); ++i) histogram[i] += c.histogram[i];
    }

    SimResult res;
    res.trials = spec.trials;
    const double n = static_cast<double>(spec.trials);
    res.empirical_outage = static_cast<double>(outage) / n;
    res.outage_stderr =
        std::sqrt(std::max(0.0, res.empirical_outage * (1.0 - res.empirical_outage) / n));
    res.mean_log_rate = total / n;
    const double var = spec.trials > 1
                           ? std::max(0.0, (total_sq - total * total / n) / (n - 1.0))
                           : 0.0;
    res.mean_log_rate_stderr = std::sqrt(var / n);
    res.cdf_z = grid;
    res.cdf_p.resize(grid.size());
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        acc += histogram[i];
        res.cdf_p[i] = static_cast<double>(acc) / n;
    }
    return res;
}

struct HoOutageResult {
    double outage = 0.0;
    bool saturated = false;
};

// Empirical P(HO-aware rate <= threshold) at the worst-case link, evaluated
// literally as M = W log2(1 + Z)(1 - Hc) per draw. This stays independent
// of the threshold-inversion rule and therefore adjudicates it.
inline HoOutageResult simulate_ho_outage(const ScenarioConfig& cfg, double mu, double speed,
                                         std::uint64_t trials, std::uint64_t seed,
                                         int shards = 1,
                                         WorstCaseModel model = WorstCaseModel::half_line) {
    const HoCost hc = ho_cost(cfg.ho_delay, mu, speed, cfg.mu_max, cfg.v_max);
    if (hc.saturated) return {1.0, true};
    if (trials < 1 || trials > (std::uint64_t{1} << 40))
        throw std::invalid_argument("simulate_ho_outage: trials must lie in [1, 2^40]");
    if (shards < 1 || shards > 4096)
        throw std::invalid_argument("simulate_ho_outage: shards must lie in [1, 4096]");
    const SinrCoefficients coeffs =
        worst_case_coefficients(cfg, mu, model, true, /*regularized=*/false);
    validate_sim_coeffs(coeffs);

    std::vector<std::uint64_t> below(shards, 0);
    auto run_shard = [&](int shard) {
        const std::uint64_t t_lo = trials * shard / shards;
        const std::uint64_t t_hi = trials * (shard + 1) / shards;
        std::uint64_t count = 0;
        for (std::uint64_t trial = t_lo; trial < t_hi; ++trial) {
            TrialRng rng(seed, trial);
            const double z = draw_sinr(rng, coeffs);
            const double m = cfg.bandwidth * std::log2(1.0 + z) * (1.0 - hc.value);
            if (m <= cfg.rate_threshold) ++count;
        }
        below[shard] = count;
    };
    if (shards == 1) {
        run_shard(0);
    } else {
        std::vector<std::future<void>> tasks;
        for (int s = 0; s < shards; ++s)
            tasks.push_back(std::async(std::launch::async, run_shard, s));
        for (auto& t : tasks) t.get();
    }
    std::uint64_t total = 0;
    for (std::uint64_t c : below) total += c;
    return {static_cast<double>(total) / static_cast<double>(trials), false};
}

}  // namespace v2i
