#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fraclab/common.hpp"
#include "fraclab/convolution.hpp"
#include "fraclab/grid.hpp"

namespace fraclab {

// A convolution semigroup described by its radial kernel profile p_t(r),
// together with the Gaussian envelope |p_t(r)| <= C t^{-dim/2} exp(-A r^2 / t)
// it claims to satisfy.  The claim is checked by validate_gaussian_bound, not
// assumed.
struct KernelFamily {
    int dim = 1;
    std::string name;
    std::function<double(double t, double r)> profile; // p_t at distance r >= 0
    double gaussian_C = 0.0;
    double gaussian_A = 0.0;
    bool conservative = true; // integral of p_t is 1 for every t
};

inline KernelFamily heat_kernel_family(int dim, double diffusion) {
    require(dim == 1 || dim == 2, "kernel family: dim must be 1 or 2");
    require(diffusion > 0.0 && std::isfinite(diffusion), "kernel family: diffusion must be positive");
    KernelFamily K;
    K.dim = dim;
    K.name = diffusion == 1.0 ? "heat" : "heat-a" + format_double(diffusion, 6);
    const double a = diffusion;
    K.profile = [dim, a](double t, double r) {
        return std::pow(4.0 * std::numbers::pi * a * t, -0.5 * dim) * std::exp(-r * r / (4.0 * a * t));
    };
    K.gaussian_C = std::pow(4.0 * std::numbers::pi * a, -0.5 * dim);
    K.gaussian_A = 1.0 / (4.0 * a);
    K.conservative = true;
    return K;
}

inline KernelFamily kernel_by_name(int dim, const std::string& name) {
    if (name == "heat") return heat_kernel_family(dim, 1.0);
    if (name == "heat-a0.5") return heat_kernel_family(dim, 0.5);
    throw std::invalid_argument("unknown kernel family \"" + name + "\" (available: heat, heat-a0.5)");
}

// Distance past which the Gaussian envelope drops below e^{-16} of its
// on-diagonal size.  Used only as an admissibility yardstick: the discrete
// operator always convolves over the whole offset lattice.
inline double truncation_radius(const KernelFamily& K, double t) {
    return 4.0 * std::sqrt(t / K.gaussian_A);
}

// A time is admissible on a grid when the kernel has decayed to negligible
// size within the margin band, so nodes in the evaluation region never see
// the box boundary.
inline bool time_admissible(const GridSpec& spec, const KernelFamily& K, double t) {
    return truncation_radius(K, t) <= spec.margin * spec.spacing() * (1.0 + 1e-12);
}

inline void require_time_admissible(const GridSpec& spec, const KernelFamily& K, double t) {
    if (!time_admissible(spec, K, t)) {
        throw std::invalid_argument(
            "margin too small for this t: kernel reach " + format_double(truncation_radius(K, t), 6) +
            " exceeds margin band " + format_double(spec.margin * spec.spacing(), 6) +
            " (t = " + format_double(t, 6) + ", N = " + std::to_string(spec.points_per_axis) +
            ", margin = " + std::to_string(spec.margin) + ")");
    }
}

// Times below 4 h^2 resolve the kernel with only a few lattice cells; results
// are still computed but callers may want to warn.
inline bool time_is_coarse(const GridSpec& spec, double t) {
    const double h = spec.spacing();
    return t < 4.0 * h * h;
}

inline RadialStencil make_semigroup_stencil(const GridSpec& spec, const KernelFamily& K, double t) {
    require(std::isfinite(t) && t > 0.0, "semigroup: t must be positive and finite");
    require(K.dim == spec.dim, "semigroup: kernel family dimension does not match the grid");
    require_time_admissible(spec, K, t);
    return make_radial_stencil(
        spec, [&K, t](double r) { return K.profile(t, r); }, K.profile(t, 0.0));
}

inline GridFunction apply_semigroup(const GridFunction& f, const KernelFamily& K, double t) {
    return convolve(f, make_semigroup_stencil(f.spec, K, t));
}

// Discrete mass h^dim * sum of the kernel over the full offset lattice.  For
// a conservative family on an admissible time this should be 1 up to the
// quadrature/aliasing floor.
inline double kernel_mass(const GridSpec& spec, const KernelFamily& K, double t) {
    require(std::isfinite(t) && t > 0.0, "semigroup: t must be positive and finite");
    const int N = spec.points_per_axis;
    const double h = spec.spacing();
    long double sum = 0.0L;
    if (spec.dim == 1) {
        sum += K.profile(t, 0.0);
        for (int d = 1; d <= N - 1; ++d) sum += 2.0L * K.profile(t, d * h);
        return static_cast<double>(sum * h);
    }
    std::unordered_map<std::int64_t, double> memo;
    for (int d0 = -(N - 1); d0 <= N - 1; ++d0)
        for (int d1 = -(N - 1); d1 <= N - 1; ++d1) {
            const std::int64_t key = static_cast<std::int64_t>(d0) * d0 + static_cast<std::int64_t>(d1) * d1;
            auto it = memo.find(key);
            if (it == memo.end()) it = memo.emplace(key, K.profile(t, std::sqrt(static_cast<double>(key)) * h)).first;
            sum += it->second;
        }
    return static_cast<double>(sum * h * h);
}

struct GaussianBoundReport {
    std::string name;
    double worst_t = 0.0;
    double worst_r = 0.0;
    double max_ratio = 0.0;
    bool pass = false;
};

// Checks |p_t(r)| <= (1 + 1e-9) C t^{-dim/2} exp(-A r^2 / t) on a sample set.
// The ratio is formed in log space so the enormous envelope factors at large
// r^2/t never overflow.
inline GaussianBoundReport validate_gaussian_bound(const KernelFamily& K, const std::vector<double>& times,
                                                   const std::vector<double>& radii) {
    require(!times.empty() && !radii.empty(), "gaussian bound: empty sample set");
    GaussianBoundReport rep;
    rep.name = K.name;
    for (double t : times) {
        require(std::isfinite(t) && t > 0.0, "gaussian bound: t must be positive and finite");
        for (double r : radii) {
            require(std::isfinite(r) && r >= 0.0, "gaussian bound: r must be nonnegative");
            const double p = K.profile(t, r);
            require(std::isfinite(p), "gaussian bound: kernel profile returned a non-finite value");
            double ratio = 0.0;
            if (p != 0.0) {
                const double log_ratio = std::log(std::fabs(p)) + 0.5 * K.dim * std::log(t) +
                                         K.gaussian_A * r * r / t - std::log(K.gaussian_C);
                ratio = std::exp(log_ratio);
            }
            if (ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.worst_t = t;
                rep.worst_r = r;
            }
        }
    }
    rep.pass = rep.max_ratio <= 1.0 + 1e-9;
    return rep;
}

// Radial majorant with a decay certificate: g is nonnegative, and
// u^{dim+epsilon} g(u) must decay at large u.
struct MajorantProfile {
    std::function<double(double)> g;
    double epsilon = 0.0;
};

struct ApproxIdentityReport {
    bool pass = false;
    bool monotone_top_decade = false;
    double final_over_max = 0.0;
    double offending_u = 0.0;
};

// Samples v(u) = u^{dim+epsilon} g(u) on a geometric ladder spanning at least
// three decades and checks that v is eventually decreasing (over the top
// decade) and ends below 1e-6 of its maximum.
inline ApproxIdentityReport validate_approx_identity(const MajorantProfile& m, int dim,
                                                     const std::vector<double>& u_samples) {
    require(m.epsilon > 0.0 && std::isfinite(m.epsilon), "approx identity: epsilon must be positive");
    require(u_samples.size() >= 8, "approx identity: need at least 8 samples");
    for (std::size_t i = 0; i + 1 < u_samples.size(); ++i)
        require(u_samples[i] > 0.0 && u_samples[i] < u_samples[i + 1],
                "approx identity: u samples must be positive and increasing");
    require(u_samples.back() / u_samples.front() >= 1e3 * (1.0 - 1e-12),
            "approx identity: samples must span at least three decades");

    std::vector<double> v(u_samples.size());
    double vmax = 0.0;
    for (std::size_t i = 0; i < u_samples.size(); ++i) {
        const double g = m.g(u_samples[i]);
        require(std::isfinite(g) && g >= 0.0, "approx identity: majorant must be finite and nonnegative");
        v[i] = std::pow(u_samples[i], dim + m.epsilon) * g;
        vmax = std::max(vmax, v[i]);
    }
    ApproxIdentityReport rep;
    rep.monotone_top_decade = true;
    const double decade_start = u_samples.back() / 10.0;
    for (std::size_t i = 0; i + 1 < u_samples.size(); ++i) {
        if (u_samples[i] < decade_start) continue;
        if (v[i + 1] > v[i] * (1.0 + 1e-12)) {
            rep.monotone_top_decade = false;
            rep.offending_u = u_samples[i + 1];
            break;
        }
    }
    rep.final_over_max = vmax > 0.0 ? v.back() / vmax : 0.0;
    rep.pass = rep.monotone_top_decade && rep.final_over_max <= 1e-6;
    return rep;
}

} // namespace fraclab
