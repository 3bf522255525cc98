#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace v2i {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

// Full description of one deployment scenario: road geometry, radio link
// budget, traffic statistics and regulatory caps. All values are SI; gains
// are linear, rates are bits per second.
struct ScenarioConfig {
    double road_length = 2000.0;     // L, m
    double bs_height = 8.0;          // BS antenna height, m
    double bs_safety = 5.0;          // lateral BS offset from the road, m
    double bs_density = 0.002;       // active BSs per meter of road
    double tx_power = 1.0;           // W
    double carrier_freq = 2.1e9;     // Hz
    double bandwidth = 4.0e7;        // Hz
    double path_loss_exp = 3.0;      // >= 2
    double tx_gain = 1.0;            // linear
    double rx_gain = 1.0;            // linear
    double noise_power = 1.507e-13;  // receiver thermal noise, W
    double fading_rate = 1.0;        // exponential rate of the Rayleigh power fading
    double ho_delay = 3.0;           // seconds lost per handoff
    double rate_threshold = 6.0e7;   // minimum acceptable HO-aware rate, bit/s
    double v_max = 30.0;             // regulated speed cap, m/s
    double mu_max = 0.01;            // regulated BS density cap, BSs/m
    double spacing_mu = 0.0;         // log-normal spacing location parameter
    double spacing_sigma = 1.0;      // log-normal spacing scale parameter
    double processing_time = 6.0e-3; // vehicle reaction/processing time, s
    double crash_tolerance = 0.01;   // admissible spacing-violation probability
    int num_cavs = 100;              // vehicle count; configuration only

    // Number of deployed BSs. Rounded from density * length and never below
    // two, so there is always at least one serving and one interfering BS.
    int bs_count() const {
        long n = std::lround(bs_density * road_length);
        return n < 2 ? 2 : static_cast<int>(n);
    }

    // Handoff delay normalized by the regulatory caps, s*m/BS.
    double normalized_ho_delay() const { return ho_delay / (mu_max * v_max); }

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string("scenario: ") + name +
                                            " must be strictly positive");
        };
        positive(road_length, "road_length");
        positive(bs_height, "bs_height");
        positive(bs_safety, "bs_safety");
        positive(bs_density, "bs_density");
        positive(tx_power, "tx_power");
        positive(carrier_freq, "carrier_freq");
        positive(bandwidth, "bandwidth");
        positive(tx_gain, "tx_gain");
        positive(rx_gain, "rx_gain");
        positive(noise_power, "noise_power");
        positive(fading_rate, "fading_rate");
        positive(ho_delay, "ho_delay");
        positive(rate_threshold, "rate_threshold");
        positive(v_max, "v_max");
        positive(mu_max, "mu_max");
        positive(processing_time, "processing_time");
        positive(spacing_sigma, "spacing_sigma");
        if (!std::isfinite(spacing_mu))
            throw std::invalid_argument("scenario: spacing_mu must be finite");
        if (!(crash_tolerance > 0.0 && crash_tolerance < 1.0))
            throw std::invalid_argument("scenario: crash_tolerance must lie in (0, 1)");
        if (!(bs_density <= mu_max))
            throw std::invalid_argument("scenario: bs_density exceeds mu_max");
        if (!(path_loss_exp >= 2.0))
            throw std::invalid_argument("scenario: path_loss_exp must be >= 2");
        if (num_cavs <= 0)
            throw std::invalid_argument("scenario: num_cavs must be positive");
    }
};

}  // namespace v2i
