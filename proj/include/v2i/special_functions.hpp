#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace v2i {

namespace detail {

// Rational starting guesses for the inverse error function, after the
// Chebyshev fits of Blair, Edwards and Johnson (Math. Comp. 30, 1976).
// Each branch is accurate to ~5e-8 relative; two Newton steps against the
// library erf finish the job.
inline double erf_inv_seed(double x) {
    const double ax = std::abs(x);
    if (ax <= 0.75) {
        static constexpr double p[3] = {-13.0959967422, 26.785225760, -9.289057635};
        static constexpr double q[4] = {-12.0749426297, 30.960614529, -17.149977991, 1.0};
        const double t = x * x - 0.75 * 0.75;
        return x * (p[0] + t * (p[1] + t * p[2])) /
               (q[0] + t * (q[1] + t * (q[2] + t * q[3])));
    }
    if (ax <= 0.9375) {
        static constexpr double p[4] = {-0.12402565221, 1.0688059574, -1.9594556078,
                                        0.4230581357};
        static constexpr double q[4] = {-0.08827697997, 0.8900743359, -2.1757031196, 1.0};
        const double t = x * x - 0.9375 * 0.9375;
        return x * (p[0] + t * (p[1] + t * (p[2] + t * p[3]))) /
               (q[0] + t * (q[1] + t * (q[2] + t * q[3])));
    }
    static constexpr double p[6] = {0.1550470003116,  1.382719649631, 0.690969348887,
                                    -1.128081391617, 0.680544246825, -0.16444156791};
    static constexpr double q[3] = {0.155024849822, 1.385228141995, 1.0};
    const double t = 1.0 / std::sqrt(-std::log(1.0 - ax));
    const double r = (p[0] / t + p[1] + t * (p[2] + t * (p[3] + t * (p[4] + t * p[5])))) /
                     (q[0] + t * (q[1] + t * q[2]));
    return std::copysign(r, x);
}

}  // namespace detail

// Inverse of erf on (-1, 1), |erf(erf_inv(p)) - p| <= 1e-12.
inline double erf_inv(double p) {
    if (!(std::abs(p) < 1.0)) throw std::domain_error("erf_inv: argument must lie in (-1, 1)");
    if (p == 0.0) return 0.0;
    double x = detail::erf_inv_seed(p);
    constexpr double half_sqrt_pi = 0.5 / std::numbers::inv_sqrtpi;
    for (int i = 0; i < 2; ++i) {
        const double r = std::erf(x) - p;
        x -= r * half_sqrt_pi * std::exp(x * x);
    }
    return x;
}

}  // namespace v2i
