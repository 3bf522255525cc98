#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "v2i/scenario.hpp"

namespace v2i {

// Isotropic free-space gain factor: G_tx * G_rx * (c / (4 pi f))^2.
inline double antenna_gain_factor(const ScenarioConfig& cfg) {
    const double wavelength_term = kSpeedOfLight / (4.0 * std::numbers::pi * cfg.carrier_freq);
    return cfg.tx_gain * cfg.rx_gain * wavelength_term * wavelength_term;
}

// Positions of all BSs along the road plus the 3-D link distances to one
// vehicle. BS j sits at (j + 1/2) / density, so consecutive BSs are exactly
// 1/density apart and every cell midpoint falls on an integer multiple of
// the cell width.
struct LinkGeometry {
    std::vector<double> bs_x;       // along-road BS coordinates, m
    double cav_x = 0.0;             // vehicle coordinate, m
    int serving_index = 0;          // nearest BS; ties resolve to the lower index
    std::vector<double> distances;  // 3-D distances to each BS, m
};

inline LinkGeometry build_geometry(const ScenarioConfig& cfg, double cav_x) {
    if (!(cav_x >= 0.0 && cav_x <= cfg.road_length))
        throw std::domain_error("build_geometry: vehicle position outside the road");
    const int n = cfg.bs_count();
    if (n < 2) throw std::domain_error("build_geometry: need at least two BSs");

    LinkGeometry geom;
    geom.cav_x = cav_x;
    geom.bs_x.resize(n);
    geom.distances.resize(n);
    const double cross2 = cfg.bs_height * cfg.bs_height + cfg.bs_safety * cfg.bs_safety;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        geom.bs_x[j] = (j + 0.5) / cfg.bs_density;
        const double dx = cav_x - geom.bs_x[j];
        geom.distances[j] = std::sqrt(dx * dx + cross2);
        if (geom.distances[j] < best) {
            best = geom.distances[j];
            geom.serving_index = j;
        }
    }
    return geom;
}

}  // namespace v2i
