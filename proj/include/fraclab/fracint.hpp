#pragma once

#include <cmath>
#include <numbers>

#include "fraclab/convolution.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/semigroup.hpp"

namespace fraclab {

// Normalizing constant gamma(alpha) = 2^alpha pi^{dim/2} Gamma(alpha/2) /
// Gamma((dim-alpha)/2) of the Riesz kernel r^{alpha-dim} / gamma(alpha).
inline double gamma_alpha(int dim, double alpha) {
    require(dim == 1 || dim == 2, "gamma_alpha: dim must be 1 or 2");
    require(alpha > 0.0 && alpha < dim, "gamma_alpha: alpha must lie in (0, dim)");
    return std::pow(2.0, alpha) * std::pow(std::numbers::pi, 0.5 * dim) * std::tgamma(0.5 * alpha) /
           std::tgamma(0.5 * (dim - alpha));
}

inline double riesz_kernel(int dim, double alpha, double r) {
    require(r > 0.0 && std::isfinite(r), "riesz kernel: r must be positive");
    return std::pow(r, alpha - dim) / gamma_alpha(dim, alpha);
}

// Cell average of the Riesz kernel over the grid cell centered at the
// singularity, used as the offset-zero stencil entry.  In dim 1 the cell
// integral is elementary; in dim 2 the polar-coordinate angular factor
// int_0^{pi/4} sec^alpha is evaluated by composite Simpson (smooth integrand,
// error far below 1e-10 at 256 panels).
inline double regularized_riesz(int dim, double alpha, double h) {
    require(h > 0.0 && std::isfinite(h), "regularized riesz: h must be positive");
    const double g = gamma_alpha(dim, alpha);
    if (dim == 1) return std::pow(0.5 * h, alpha - 1.0) / (alpha * g);
    const int panels = 256;
    const double width = std::numbers::pi / 4.0 / panels;
    long double acc = 0.0L;
    for (int i = 0; i <= 2 * panels; ++i) {
        const double theta = 0.5 * width * i;
        const double v = std::pow(1.0 / std::cos(theta), alpha);
        const double w = (i == 0 || i == 2 * panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * v;
    }
    const double angular = static_cast<double>(acc) * width / 6.0;
    return 8.0 * std::pow(0.5 * h, alpha) / (alpha * h * h * g) * angular;
}

// Kernel of the fractional power: one value of
//   (1/Gamma(alpha/2)) int_0^inf p_t(r) t^{alpha/2 - 1} dt
// computed in s = log t.  Throws when the window has not captured the
// integrand's support.
inline double k_alpha_profile(const KernelFamily& K, double alpha, double r, const QuadratureSpec& q) {
    require(alpha > 0.0 && alpha < K.dim, "fractional integral: alpha must lie in (0, dim)");
    require(r > 0.0 && std::isfinite(r), "fractional integral: r must be positive");
    const double value = log_trapezoid_checked(
        [&](double s) { return K.profile(std::exp(s), r) * std::exp(0.5 * alpha * s); }, q);
    return value / std::tgamma(0.5 * alpha);
}

// Quadrature window that covers every radius in [r_lo, r_hi] for this family
// and exponent.  Seeds sit at the peak of the Gaussian-envelope integrand,
// s = log(A r^2 / kappa) with kappa = (dim - alpha)/2, and auto_window grows
// them until both tails are dead.
inline QuadratureSpec default_window(const KernelFamily& K, double alpha, double r_lo, double r_hi,
                                     int min_steps = 512) {
    require(alpha > 0.0 && alpha < K.dim, "fractional integral: alpha must lie in (0, dim)");
    require(r_lo > 0.0 && r_hi >= r_lo && std::isfinite(r_hi), "default window: bad radius range");
    const double kappa = 0.5 * (K.dim - alpha);
    const auto window_for = [&](double r) {
        const double peak_s = std::log(K.gaussian_A * r * r / kappa);
        return auto_window([&K, alpha, r](double s) { return K.profile(std::exp(s), r) * std::exp(0.5 * alpha * s); },
                           peak_s - 4.0, peak_s + 4.0, min_steps);
    };
    const QuadratureSpec lo = window_for(r_lo);
    const QuadratureSpec hi = window_for(r_hi);
    const double s_min = std::min(lo.s_min, hi.s_min);
    const double s_max = std::max(lo.s_max, hi.s_max);
    const int steps = std::max({min_steps, lo.steps, hi.steps, static_cast<int>(std::ceil((s_max - s_min) / 0.25))});
    return QuadratureSpec(s_min, s_max, steps);
}

inline QuadratureSpec default_window(const GridSpec& spec, const KernelFamily& K, double alpha,
                                     int min_steps = 512) {
    const double h = spec.spacing();
    const double reach = std::sqrt(static_cast<double>(spec.dim)) * (spec.points_per_axis - 1) * h;
    return default_window(K, alpha, h, reach, min_steps);
}

inline RadialStencil make_riesz_stencil(const GridSpec& spec, double alpha) {
    require(alpha > 0.0 && alpha < spec.dim, "fractional integral: alpha must lie in (0, dim)");
    const int dim = spec.dim;
    return make_radial_stencil(
        spec, [dim, alpha](double r) { return riesz_kernel(dim, alpha, r); },
        regularized_riesz(dim, alpha, spec.spacing()));
}

// Riesz route: convolution against r^{alpha-dim}/gamma(alpha) with the
// regularized self cell.
inline GridFunction fractional_integral(const GridFunction& f, double alpha) {
    return convolve(f, make_riesz_stencil(f.spec, alpha));
}

// Semigroup route: the same operator assembled by integrating the kernel
// family in time.  The self cell reuses the Riesz regularization, rescaled by
// the ratio of the two kernels at the first lattice radius, so a family equal
// to the Gaussian reproduces the Riesz stencil exactly and any other family
// keeps a consistent near-diagonal normalization.
inline RadialStencil make_l_alpha_stencil(const GridSpec& spec, const KernelFamily& K, double alpha,
                                          const QuadratureSpec& q) {
    require(K.dim == spec.dim, "fractional integral: kernel family dimension does not match the grid");
    const double h = spec.spacing();
    const double anchor = k_alpha_profile(K, alpha, h, q) / riesz_kernel(spec.dim, alpha, h);
    const double self = regularized_riesz(spec.dim, alpha, h) * anchor;
    return make_radial_stencil(
        spec, [&K, alpha, &q](double r) { return k_alpha_profile(K, alpha, r, q); }, self);
}

inline GridFunction l_alpha(const GridFunction& f, const KernelFamily& K, double alpha, const QuadratureSpec& q) {
    return convolve(f, make_l_alpha_stencil(f.spec, K, alpha, q));
}

// Kernel of L^{-alpha/2} - e^{-tL} L^{-alpha/2} at distance r: a single time
// integral of p_s(r) - p_{s+t}(r) against s^{alpha/2 - 1}.
inline double difference_kernel(const KernelFamily& K, double alpha, double t, double r, const QuadratureSpec& q) {
    require(alpha > 0.0 && alpha < K.dim, "difference kernel: alpha must lie in (0, dim)");
    require(t > 0.0 && std::isfinite(t), "difference kernel: t must be positive");
    require(r > 0.0 && std::isfinite(r), "difference kernel: r must be positive");
    const double value = log_trapezoid_checked(
        [&](double s) {
            const double u = std::exp(s);
            return (K.profile(u, r) - K.profile(u + t, r)) * std::exp(0.5 * alpha * s);
        },
        q);
    return value / std::tgamma(0.5 * alpha);
}

// Window for the difference integrand: its mass sits around both the kernel
// peak for radius r and the shift scale t, so both are seeded.
inline QuadratureSpec difference_window(const KernelFamily& K, double alpha, double t, double r,
                                        int min_steps = 512) {
    const double kappa = 0.5 * (K.dim - alpha);
    const double peak_s = std::log(K.gaussian_A * r * r / kappa);
    const double seed_lo = std::min(peak_s, std::log(t)) - 4.0;
    const double seed_hi = std::max(peak_s, std::log(t)) + 4.0;
    return auto_window(
        [&](double s) {
            const double u = std::exp(s);
            return (K.profile(u, r) - K.profile(u + t, r)) * std::exp(0.5 * alpha * s);
        },
        seed_lo, seed_hi, min_steps);
}

// (I - e^{-tL}) applied after L^{-alpha/2} on the grid.
inline GridFunction apply_difference(const GridFunction& f, const KernelFamily& K, double alpha, double t,
                                     const QuadratureSpec& q) {
    const GridFunction lf = l_alpha(f, K, alpha, q);
    const GridFunction sf = apply_semigroup(lf, K, t);
    GridFunction out(f.spec);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = lf.values[i] - sf.values[i];
    return out;
}

} // namespace fraclab
