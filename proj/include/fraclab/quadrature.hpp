#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fraclab/common.hpp"

namespace fraclab {

// Window and step count for trapezoid quadrature in s = log t.  The
// substitution removes the endpoint singularity of t^{alpha/2 - 1} weights,
// and uniform trapezoid on a smooth integrand that decays at both window ends
// converges spectrally in the step count.
struct QuadratureSpec {
    double s_min = 0.0;
    double s_max = 0.0;
    int steps = 0;

    QuadratureSpec() = default;
    QuadratureSpec(double lo, double hi, int n) : s_min(lo), s_max(hi), steps(n) {
        require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
                "quadrature: window must be finite with s_min < s_max");
        require(n >= 64, "quadrature: need at least 64 steps");
    }
};

struct TrapezoidResult {
    double value = 0.0;
    double max_abs = 0.0;      // largest |integrand| sample in the window
    double boundary_lo = 0.0;  // |integrand| at s_min
    double boundary_hi = 0.0;  // |integrand| at s_max
    bool boundary_ok = false;  // both ends <= 1e-12 * max_abs
};

// Integrates g(s) ds over [s_min, s_max] with the composite trapezoid rule
// and records whether the integrand has decayed at both window ends.  The
// decay check is what certifies the window: a window that cuts into live
// integrand mass is reported, never silently accepted.
template <typename F>
TrapezoidResult log_trapezoid(F&& g, const QuadratureSpec& q) {
    require(q.steps >= 64, "quadrature: need at least 64 steps");
    const double delta = (q.s_max - q.s_min) / q.steps;
    long double acc = 0.0L;
    TrapezoidResult res;
    for (int i = 0; i <= q.steps; ++i) {
        const double s = q.s_min + delta * i;
        const double v = g(s);
        require(std::isfinite(v), "quadrature: integrand returned a non-finite value at s = " + format_double(s, 6));
        const double a = std::fabs(v);
        if (a > res.max_abs) res.max_abs = a;
        if (i == 0) res.boundary_lo = a;
        if (i == q.steps) res.boundary_hi = a;
        acc += (i == 0 || i == q.steps) ? 0.5L * v : static_cast<long double>(v);
    }
    res.value = static_cast<double>(acc * delta);
    const double floor = 1e-12 * res.max_abs;
    res.boundary_ok = res.boundary_lo <= floor && res.boundary_hi <= floor;
    return res;
}

template <typename F>
double log_trapezoid_checked(F&& g, const QuadratureSpec& q) {
    const TrapezoidResult res = log_trapezoid(g, q);
    if (!res.boundary_ok) {
        throw std::invalid_argument(
            "quadrature window too narrow: integrand ends at " + format_double(res.boundary_lo, 3) + " / " +
            format_double(res.boundary_hi, 3) + " against peak " + format_double(res.max_abs, 3) +
            " on [" + format_double(q.s_min, 6) + ", " + format_double(q.s_max, 6) + "]");
    }
    return res.value;
}

// Grows a window outward from a seed interval until the integrand at both
// ends is below 1e-13 of the observed peak, then pads by one unit.  The
// expansion re-runs whenever a probe raises the peak estimate, so a badly
// placed seed still converges to a sound window.  The trapezoid boundary
// check above remains the authority at integration time.
inline QuadratureSpec auto_window(const std::function<double(double)>& g, double seed_lo, double seed_hi,
                                  int min_steps = 512) {
    require(std::isfinite(seed_lo) && std::isfinite(seed_hi) && seed_lo < seed_hi,
            "auto window: seed interval is invalid");
    double lo = seed_lo;
    double hi = seed_hi;
    double peak = 0.0;
    for (int i = 0; i <= 128; ++i) {
        const double s = seed_lo + (seed_hi - seed_lo) * i / 128.0;
        const double v = std::fabs(g(s));
        require(std::isfinite(v), "auto window: integrand is non-finite inside the seed interval");
        peak = std::max(peak, v);
    }
    require(peak > 0.0, "auto window: integrand vanishes on the whole seed interval");

    for (int attempt = 0; attempt < 8; ++attempt) {
        const double before = peak;
        int guard = 0;
        for (;;) {
            const double v = std::fabs(g(lo));
            if (v <= 1e-13 * peak) break; // NaN fails this and is caught below
            require(std::isfinite(v) && ++guard < 4000,
                    "auto window: integrand does not decay at the lower end");
            peak = std::max(peak, v);
            lo -= 0.5;
        }
        guard = 0;
        for (;;) {
            const double v = std::fabs(g(hi));
            if (v <= 1e-13 * peak) break;
            require(std::isfinite(v) && ++guard < 4000,
                    "auto window: integrand does not decay at the upper end");
            peak = std::max(peak, v);
            hi += 0.5;
        }
        if (peak <= before * 1.5) break;
    }
    lo -= 1.0;
    hi += 1.0;
    // Cap the step size at 0.25 in s; the trapezoid error term e^{-pi^2/step}
    // is then far below the 1e-12 boundary floor.
    const int steps = std::max({min_steps, 64, static_cast<int>(std::ceil((hi - lo) / 0.25))});
    return QuadratureSpec(lo, hi, steps);
}

} // namespace fraclab
