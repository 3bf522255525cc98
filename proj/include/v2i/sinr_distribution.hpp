#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "v2i/coefficients.hpp"

namespace v2i {

// Treatment of receiver noise inside the closed-form SINR distribution.
//
// The partial-fraction form of the distribution admits a per-interferer
// noise factor exp(s * lambda * N / b_k) with either sign s; both are kept
// because neither reproduces the simulated distribution once N is
// comparable to the weakest interferer coefficients. The exact treatment
// carries the noise in a factor exp(-lambda * N * z / a) instead and is the
// default: it is the variant the Monte Carlo discriminator selects (see the
// validation suite), integrates to one identically, and vanishes at z = 0.
enum class NoiseExponent {
    positive,  // exp(+lambda * N / b_k) per interferer
    negative,  // exp(-lambda * N / b_k) per interferer
    exact,     // exp(-lambda * N * z / a), plus the induced density term
};

inline const char* to_string(NoiseExponent v) {
    switch (v) {
        case NoiseExponent::positive: return "positive";
        case NoiseExponent::negative: return "negative";
        default: return "exact";
    }
}

// Closed-form SINR distribution for one coefficient set. Construction
// precomputes the partial-fraction weights prod_{l != k} b_k / (b_k - b_l),
// which demand pairwise-distinct interferer coefficients; near-duplicate
// sets must go through regularize_coefficients first. Weights of
// regularized duplicate pairs reach ~1/rel_jitter, so all partial-fraction
// arithmetic runs in long double to keep the cancellation benign.
class SinrDistribution {
  public:
    explicit SinrDistribution(SinrCoefficients coeffs,
                              NoiseExponent variant = NoiseExponent::exact)
        : coeffs_(std::move(coeffs)), variant_(variant) {
        check_coefficients();
        const auto& b = coeffs_.interferer_coeffs;
        const std::size_t n = b.size();
        weights_.assign(n, 1.0L);
        noise_factors_.assign(n, 1.0L);
        b_.assign(b.begin(), b.end());
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t l = 0; l < n; ++l)
                if (l != k) weights_[k] *= b_[k] / (b_[k] - b_[l]);
            if (variant_ != NoiseExponent::exact && coeffs_.noise_power > 0.0) {
                const long double x =
                    static_cast<long double>(coeffs_.fading_rate) * coeffs_.noise_power / b_[k];
                noise_factors_[k] = std::exp(variant_ == NoiseExponent::positive ? x : -x);
            }
        }
        serving_ = coeffs_.serving_coeff;
        // Noise-only links (no interferers) fall back to the exact unique form
        // whatever the requested variant: the per-interferer factors do not exist.
        if (variant_ == NoiseExponent::exact || b.empty())
            noise_decay_ = static_cast<long double>(coeffs_.fading_rate) * coeffs_.noise_power /
                           serving_;
    }

    double pdf(double z) const {
        if (!(z >= 0.0)) throw std::domain_error("sinr pdf: z must be nonnegative");
        const long double a = serving_;
        long double sum = 0.0L, comp = 0.0L;
        for (std::size_t k = 0; k < b_.size(); ++k) {
            const long double den = a + b_[k] * z;
            long double term = weights_[k] * noise_factors_[k] * a * b_[k] / (den * den);
            if (noise_decay_ > 0.0L)
                term += weights_[k] * noise_decay_ * a / den;  // lambda*N/(a + b_k z)
            accumulate(sum, comp, term);
        }
        long double value = sum + comp;
        if (b_.empty()) value = noise_decay_;  // noise-only link: Exp(lambda N / a) in z
        if (noise_decay_ > 0.0L) value *= std::exp(-noise_decay_ * z);
        return static_cast<double>(value);
    }

    double cdf(double z) const {
        if (!(z >= 0.0)) throw std::domain_error("sinr cdf: z must be nonnegative");
        return static_cast<double>(1.0L - survival(static_cast<long double>(z)));
    }

    // 1 - cdf(z), the form the rate integrals consume.
    long double survival(long double z) const {
        const long double a = serving_;
        long double sum = 0.0L, comp = 0.0L;
        for (std::size_t k = 0; k < b_.size(); ++k)
            accumulate(sum, comp, weights_[k] * noise_factors_[k] * a / (a + b_[k] * z));
        long double value = b_.empty() ? 1.0L : sum + comp;
        if (noise_decay_ > 0.0L) value *= std::exp(-noise_decay_ * z);
        return value;
    }

    const SinrCoefficients& coefficients() const { return coeffs_; }
    NoiseExponent noise_exponent() const { return variant_; }
    const std::vector<long double>& partial_fraction_weights() const { return weights_; }
    const std::vector<long double>& noise_factors() const { return noise_factors_; }

  private:
    static void accumulate(long double& sum, long double& comp, long double term) {
        // Neumaier compensated summation
        const long double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
    }

    void check_coefficients() {
        const auto& c = coeffs_;
        if (!(c.serving_coeff > 0.0))
            throw std::invalid_argument("sinr distribution: serving coefficient must be positive");
        if (!(c.fading_rate > 0.0))
            throw std::invalid_argument("sinr distribution: fading rate must be positive");
        if (c.noise_power < 0.0)
            throw std::invalid_argument("sinr distribution: negative noise power");
        for (std::size_t k = 0; k < c.interferer_coeffs.size(); ++k)
            if (!(c.interferer_coeffs[k] > 0.0)) {
                std::ostringstream oss;
                oss << "sinr distribution: interferer coefficient " << k << " = "
                    << c.interferer_coeffs[k] << " is not positive";
                throw std::invalid_argument(oss.str());
            }
        if (c.interferer_coeffs.empty() && !(c.noise_power > 0.0))
            throw std::invalid_argument(
                "sinr distribution: no interferers and no noise leaves the SINR unbounded");
        std::vector<double> sorted = c.interferer_coeffs;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k + 1 < sorted.size(); ++k)
            if (sorted[k + 1] - sorted[k] < 1e-13 * sorted[k + 1]) {
                std::ostringstream oss;
                oss << "sinr distribution: interferer coefficients " << sorted[k] << " and "
                    << sorted[k + 1] << " coincide; apply regularize_coefficients first";
                throw std::invalid_argument(oss.str());
            }
    }

    SinrCoefficients coeffs_;
    NoiseExponent variant_;
    long double serving_ = 0.0L;
    long double noise_decay_ = 0.0L;  // lambda * N / a (exact variant only)
    std::vector<long double> b_;
    std::vector<long double> weights_;
    std::vector<long double> noise_factors_;
};

inline double outage_probability(const SinrDistribution& dist, double gamma_th) {
    if (!(gamma_th >= 0.0))
        throw std::domain_error("outage_probability: threshold must be nonnegative");
    return dist.cdf(gamma_th);
}

// Density of the aggregate interference sum_k b_k chi_k (hypoexponential).
inline double interference_pdf(const SinrDistribution& dist, double t) {
    if (!(t >= 0.0)) throw std::domain_error("interference_pdf: t must be nonnegative");
    const auto& b = dist.coefficients().interferer_coeffs;
    const long double lam = dist.coefficients().fading_rate;
    long double sum = 0.0L;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const long double bk = b[k];
        sum += dist.partial_fraction_weights()[k] * (lam / bk) *
               std::exp(-lam * static_cast<long double>(t) / bk);
    }
    return static_cast<double>(sum);
}

// P(sum_k b_k chi_k > t).
inline double interference_survival(const SinrDistribution& dist, double t) {
    if (!(t >= 0.0)) throw std::domain_error("interference_survival: t must be nonnegative");
    const auto& b = dist.coefficients().interferer_coeffs;
    const long double lam = dist.coefficients().fading_rate;
    long double sum = 0.0L;
    for (std::size_t k = 0; k < b.size(); ++k)
        sum += dist.partial_fraction_weights()[k] *
               std::exp(-lam * static_cast<long double>(t) / static_cast<long double>(b[k]));
    return static_cast<double>(sum);
}

}  // namespace v2i
