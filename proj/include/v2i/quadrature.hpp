#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace v2i {

class QuadratureError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct QuadratureResult {
    long double value = 0.0L;
    long double error = 0.0L;
    int intervals = 0;
    std::size_t evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 15(7) abscissae and weights on [-1, 1].
inline constexpr long double kGk15Nodes[8] = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144838258730L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.0L};
inline constexpr long double kGk15Weights[8] = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
inline constexpr long double kGauss7Weights[4] = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

template <class F>
inline void gk15(F& f, long double lo, long double hi, long double& kronrod,
                 long double& err, std::size_t& evals) {
    const long double mid = 0.5L * (lo + hi);
    const long double half = 0.5L * (hi - lo);
    long double fk = 0.0L, fg = 0.0L;
    for (int i = 0; i < 8; ++i) {
        const long double dx = half * kGk15Nodes[i];
        long double v = static_cast<long double>(f(static_cast<double>(mid - dx)));
        if (i != 7) v += static_cast<long double>(f(static_cast<double>(mid + dx)));
        evals += (i != 7) ? 2 : 1;
        if (!std::isfinite(static_cast<double>(v))) {
            std::ostringstream oss;
            oss << "quadrature: non-finite integrand near z = " << static_cast<double>(mid - dx);
            throw QuadratureError(oss.str());
        }
        fk += kGk15Weights[i] * v;
        if (i % 2 == 1) fg += kGauss7Weights[i / 2] * v;
    }
    kronrod = fk * half;
    err = std::abs((fk - fg) * half);
}

struct Interval {
    long double lo, hi, value, error;
    bool operator<(const Interval& o) const {
        if (error != o.error) return error < o.error;
        return lo > o.lo;  // deterministic tie-break
    }
};

}  // namespace detail

// Adaptive Gauss-Kronrod integration over a list of seed segments given by
// strictly increasing breakpoints. Refines the worst segment until the
// summed error estimate drops below abs_tol.
template <class F>
QuadratureResult integrate_adaptive(F&& f, const std::vector<long double>& breakpoints,
                                    long double abs_tol, int max_intervals = 4000) {
    if (breakpoints.size() < 2)
        throw std::invalid_argument("integrate_adaptive: need at least two breakpoints");
    if (!(abs_tol > 0.0L))
        throw std::invalid_argument("integrate_adaptive: abs_tol must be positive");

    std::priority_queue<detail::Interval> heap;
    QuadratureResult res;
    long double total = 0.0L, total_err = 0.0L;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw std::invalid_argument("integrate_adaptive: breakpoints not increasing");
        detail::Interval iv{breakpoints[i], breakpoints[i + 1], 0.0L, 0.0L};
        detail::gk15(f, iv.lo, iv.hi, iv.value, iv.error, res.evaluations);
        total += iv.value;
        total_err += iv.error;
        heap.push(iv);
    }

    long double stuck_err = 0.0L;  // error pinned in intervals at floating-point resolution
    while (total_err > abs_tol && static_cast<int>(heap.size()) < max_intervals && !heap.empty()) {
        detail::Interval worst = heap.top();
        heap.pop();
        const long double mid = 0.5L * (worst.lo + worst.hi);
        if (!(worst.lo < mid && mid < worst.hi)) {
            total_err -= worst.error;
            stuck_err += worst.error;
            continue;  // value stays counted; the segment cannot be split further
        }
        total -= worst.value;
        total_err -= worst.error;
        for (detail::Interval half : {detail::Interval{worst.lo, mid, 0.0L, 0.0L},
                                      detail::Interval{mid, worst.hi, 0.0L, 0.0L}}) {
            detail::gk15(f, half.lo, half.hi, half.value, half.error, res.evaluations);
            total += half.value;
            total_err += half.error;
            heap.push(half);
        }
    }

    if (total_err + stuck_err > abs_tol) {
        std::ostringstream oss;
        oss << "quadrature: no convergence after " << heap.size() << " intervals; error "
            << static_cast<double>(total_err + stuck_err) << " > tolerance "
            << static_cast<double>(abs_tol);
        throw QuadratureError(oss.str());
    }
    res.value = total;
    res.error = total_err + stuck_err;
    res.intervals = static_cast<int>(heap.size());
    return res;
}

}  // namespace v2i
