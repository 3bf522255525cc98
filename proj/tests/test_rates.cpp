#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "v2i/rates.hpp"

using namespace v2i;

TEST_CASE("ho_cost: arithmetic, clamp and flag") {
    const HoCost mid = ho_cost(3.0, 0.002, 20.0, 0.01, 30.0);
    CHECK(mid.value == Catch::Approx(0.4).epsilon(1e-15));
    CHECK_FALSE(mid.saturated);

    CHECK(ho_cost(3.0, 0.002, 0.0, 0.01, 30.0).value == 0.0);

    const HoCost corner = ho_cost(3.0, 0.01, 30.0, 0.01, 30.0);
    CHECK(corner.raw == Catch::Approx(3.0));
    CHECK(corner.value == 1.0);
    CHECK(corner.saturated);

    CHECK_THROWS_AS(ho_cost(0.0, 0.002, 20.0, 0.01, 30.0), std::domain_error);
    CHECK_THROWS_AS(ho_cost(3.0, 0.002, -1.0, 0.01, 30.0), std::domain_error);
}

TEST_CASE("sinr_threshold: both inversion rules") {
    CHECK(sinr_threshold(0.0, 4e7, 0.0, ThresholdVariant::pow2) == 1.0);
    CHECK(sinr_threshold(0.0, 4e7, 0.0, ThresholdVariant::shannon) == 0.0);
    CHECK(sinr_threshold(6e7, 4e7, 0.0, ThresholdVariant::pow2) ==
          Catch::Approx(2.8284271247461903).epsilon(1e-15));
    CHECK(sinr_threshold(6e7, 4e7, 0.0, ThresholdVariant::shannon) ==
          Catch::Approx(1.8284271247461903).epsilon(1e-15));
    CHECK(sinr_threshold(6e7, 4e7, 0.5) ==
          Catch::Approx(std::exp2(3.0) - 1.0).epsilon(1e-15));
    CHECK_THROWS_AS(sinr_threshold(6e7, 4e7, 1.0), std::domain_error);
}

TEST_CASE("ergodic rate: equal-coefficient analytic integral") {
    SinrCoefficients c{1.0, {1.0}, 1.0, 0.0};
    const SinrDistribution dist(c);
    CHECK(ergodic_rate_quadrature(dist) ==
          Catch::Approx(1.0 / std::numbers::ln2).epsilon(1e-9));
}

TEST_CASE("ergodic rate: noise-only link against the exponential-integral form") {
    for (double ratio : {0.018285, 0.5, 3.0}) {
        SinrCoefficients c{1.0, {}, 1.0, ratio};
        const SinrDistribution dist(c);
        CHECK(ergodic_rate_quadrature(dist) ==
              Catch::Approx(oracle::noise_only_rate(1.0, 1.0, ratio)).epsilon(1e-7));
    }
}

TEST_CASE("ergodic rate: quadrature matches the well-posed closed expression") {
    SinrCoefficients c{1.0, {0.5, 0.2}, 1.0, 0.0};
    const SinrDistribution dist(c);
    long double expect = 0.0L;
    for (std::size_t k = 0; k < c.interferer_coeffs.size(); ++k) {
        const long double b = c.interferer_coeffs[k];
        expect += dist.partial_fraction_weights()[k] / (1.0L - b) * std::log(1.0L / b);
    }
    CHECK(ergodic_rate_quadrature(dist) ==
          Catch::Approx(static_cast<double>(expect) / std::numbers::ln2).epsilon(1e-9));
}

TEST_CASE("printed closed rate: constant arctangent offset is flagged") {
    SinrCoefficients c{1.0, {0.5, 0.2}, 1.0, 0.0};
    const SinrDistribution dist(c);
    const ClosedFormRate closed = ergodic_rate_closed(dist);

    long double expect = 0.0L;
    for (std::size_t k = 0; k < c.interferer_coeffs.size(); ++k) {
        const long double b = c.interferer_coeffs[k];
        expect += dist.partial_fraction_weights()[k] / (1.0L - b) *
                  (std::log(1.0L / b) + std::numbers::pi / 2.0);
    }
    CHECK(closed.value ==
          Catch::Approx(static_cast<double>(expect) / std::numbers::ln2).epsilon(1e-12));
    CHECK(closed.flagged);
    CHECK(closed.rel_deviation > 1e-1);
    CHECK(closed.reference == Catch::Approx(ergodic_rate_quadrature(dist)).epsilon(1e-12));
}

TEST_CASE("printed closed rate: noise enters only through the exponential factors") {
    // exp(lambda N / b_k) depends on lambda and N only through their product,
    // and beta_k does not move with lambda at all.
    SinrCoefficients c1{1.0, {0.5, 0.2}, 2.0, 0.05};
    SinrCoefficients c2{1.0, {0.5, 0.2}, 1.0, 0.10};
    const double v1 = ergodic_rate_closed(SinrDistribution(c1)).value;
    const double v2 = ergodic_rate_closed(SinrDistribution(c2)).value;
    CHECK(v1 == Catch::Approx(v2).epsilon(1e-12));
}

TEST_CASE("printed closed rate: singular at a touching coefficient") {
    SinrCoefficients c{1.0, {1.0, 0.2}, 1.0, 0.0};
    const SinrDistribution dist(c);
    CHECK_THROWS_AS(ergodic_rate_closed(dist), std::domain_error);
}

TEST_CASE("ho_aware_rate: discount arithmetic") {
    ScenarioConfig cfg;
    CHECK(cfg.normalized_ho_delay() == Catch::Approx(10.0));
    CHECK(ho_aware_rate(cfg, 0.002, 0.0, 2.0) == Catch::Approx(8e7));
    // normalized cost 1/2 halves the static rate
    CHECK(ho_aware_rate(cfg, 0.0025, 20.0, 2.0) == Catch::Approx(4e7));
    // saturated corner clamps to zero rather than going negative
    CHECK(ho_aware_rate(cfg, 0.01, 30.0, 2.0) == 0.0);
}

TEST_CASE("worst_case_rate: continuous between deployment steps") {
    ScenarioConfig cfg;
    // N = round(2000 mu) stays 4 on this interval
    double prev = worst_case_rate(cfg, 0.0019);
    for (int i = 1; i <= 40; ++i) {
        const double mu = 0.0019 + (0.0022 - 0.0019) * i / 40.0;
        const double cur = worst_case_rate(cfg, mu);
        CHECK(std::abs(cur - prev) < 5e-3 * prev);
        prev = cur;
    }
}

TEST_CASE("worst_case_rate: vanishing interference approaches the noise-limited rate") {
    ScenarioConfig cfg;
    cfg.road_length = 1000.0;
    cfg.mu_max = 0.01;
    cfg.bs_density = 1e-5;
    const double mu = 1e-5;  // N clamps to 2, lone interferer 150 km away
    const double with_interference = worst_case_rate(cfg, mu);
    const double noise_only =
        worst_case_rate(cfg, mu, WorstCaseModel::half_line, NoiseExponent::exact, false);
    CHECK(with_interference == Catch::Approx(noise_only).epsilon(1e-3));
    const SinrCoefficients c = worst_case_coefficients(cfg, mu, WorstCaseModel::half_line, false);
    CHECK(noise_only ==
          Catch::Approx(oracle::noise_only_rate(c.serving_coeff, c.fading_rate, c.noise_power))
              .epsilon(1e-6));
}

TEST_CASE("analyze_link: saturated handoff cost forces certain outage") {
    ScenarioConfig cfg;
    const auto coeffs = worst_case_coefficients(cfg, 0.01);
    const RateReport rep = analyze_link(cfg, coeffs, 0.01, 30.0);
    CHECK(rep.ho_saturated);
    CHECK(rep.outage == 1.0);
    CHECK(rep.ho_aware_rate == 0.0);
    CHECK(rep.ergodic_rate > 0.0);
}

TEST_CASE("quadrature: diagnostics on hopeless budgets") {
    auto wiggle = [](double x) { return std::sin(50.0 * x); };
    std::vector<long double> brk{0.0L, 10.0L};
    CHECK_THROWS_AS(integrate_adaptive(wiggle, brk, 1e-19L, 4), QuadratureError);
    auto bad = [](double x) { return x < 0.5 ? 1.0 : std::numeric_limits<double>::quiet_NaN(); };
    CHECK_THROWS_AS(integrate_adaptive(bad, brk, 1e-9L), QuadratureError);
}
