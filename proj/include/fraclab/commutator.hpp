#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>

#include "fraclab/fracint.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/norms.hpp"

namespace fraclab {

using GridOp = std::function<GridFunction(const GridFunction&)>;

inline GridFunction pointwise_multiply(const GridFunction& a, const GridFunction& b) {
    require(a.spec == b.spec, "pointwise multiply: grids differ");
    GridFunction out(a.spec);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
    return out;
}

inline GridFunction subtract(const GridFunction& a, const GridFunction& b) {
    require(a.spec == b.spec, "subtract: grids differ");
    GridFunction out(a.spec);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] - b.values[i];
    return out;
}

// [b, T] f = b * T f - T(b f).
inline GridFunction commutator(const GridFunction& b, const GridOp& T, const GridFunction& f) {
    require(b.spec == f.spec, "commutator: symbol and argument live on different grids");
    return subtract(pointwise_multiply(b, T(f)), T(pointwise_multiply(b, f)));
}

// Iterated commutator by the recurrence C_m f = b * C_{m-1} f - C_{m-1}(b f),
// which expands T exactly 2^m times.
inline GridFunction higher_commutator(const GridFunction& b, const GridOp& T, const GridFunction& f, int m) {
    require(m >= 1, "commutator order must be >= 1");
    if (m == 1) return commutator(b, T, f);
    const GridOp inner = [&b, &T, m](const GridFunction& g) { return higher_commutator(b, T, g, m - 1); };
    return subtract(pointwise_multiply(b, inner(f)), inner(pointwise_multiply(b, f)));
}

// Dense kernel route: C_m f(x) = h^dim sum_y (b(x) - b(y))^m K(|x-y|) f(y)
// with the diagonal cell omitted (its factor (b(x)-b(x))^m vanishes for
// m >= 1, and the kernel profile need not be finite at 0).  Quadratic in the
// node count, so it is reserved for small grids as an independent oracle for
// the recurrence route.
inline GridFunction kernel_commutator(const GridFunction& b, const std::function<double(double)>& profile,
                                      const GridFunction& f, int m) {
    require(m >= 1, "commutator order must be >= 1");
    require(b.spec == f.spec, "commutator: symbol and argument live on different grids");
    const GridSpec& s = f.spec;
    require(s.node_count() <= 4096, "kernel commutator: grid too large for the dense route (max 4096 nodes)");
    const int N = s.points_per_axis;
    const double h = s.spacing();
    const double cell = s.dim == 1 ? h : h * h;

    std::unordered_map<std::int64_t, double> kernel;
    kernel.reserve(4096);
    const auto kernel_at = [&](std::int64_t r2) {
        auto it = kernel.find(r2);
        if (it == kernel.end()) it = kernel.emplace(r2, profile(std::sqrt(static_cast<double>(r2)) * h)).first;
        return it->second;
    };

    GridFunction out(s);
    const std::int64_t total = s.node_count();
    for (std::int64_t x = 0; x < total; ++x) {
        const auto xn = s.node_indices(x);
        const double bx = b.values[static_cast<std::size_t>(x)];
        long double acc = 0.0L;
        for (std::int64_t y = 0; y < total; ++y) {
            if (y == x) continue;
            const auto yn = s.node_indices(y);
            const std::int64_t d0 = xn[0] - yn[0];
            const std::int64_t d1 = s.dim == 2 ? xn[1] - yn[1] : 0;
            double factor = bx - b.values[static_cast<std::size_t>(y)];
            double power = factor;
            for (int k = 1; k < m; ++k) power *= factor;
            acc += power * kernel_at(d0 * d0 + d1 * d1) * f.values[static_cast<std::size_t>(y)];
        }
        out.values[static_cast<std::size_t>(x)] = static_cast<double>(acc) * cell;
    }
    (void)N;
    return out;
}

// A symbol with memoized norm evaluations, so experiment loops can ask for
// the same Campanato or Holder norm repeatedly without recomputing it.
struct SymbolFunction {
    std::string label;
    GridFunction values;
    mutable std::map<std::string, double> norm_cache;

    SymbolFunction(std::string lab, GridFunction v) : label(std::move(lab)), values(std::move(v)) {}

    double campanato(double p, double beta, const std::vector<Ball>& balls) const {
        const std::string key = "campanato:" + format_double(p) + ":" + format_double(beta) + ":" +
                                detail::family_fingerprint(balls);
        auto it = norm_cache.find(key);
        if (it == norm_cache.end()) it = norm_cache.emplace(key, campanato_norm(values, p, beta, balls).value).first;
        return it->second;
    }

    double lip(double beta) const {
        const std::string key = "lip:" + format_double(beta);
        auto it = norm_cache.find(key);
        if (it == norm_cache.end()) it = norm_cache.emplace(key, lip_norm(values, beta).value).first;
        return it->second;
    }
};

struct DominationReport {
    double max_ratio = 0.0;
    double lip_norm_used = 0.0;
    std::int64_t skipped = 0; // nodes under the denominator floor
    std::array<double, 2> argmax{0.0, 0.0};
};

// Pointwise domination of the iterated commutator by the fractional integral
// of elevated order: |C_m f| against ||b||_{Lip beta}^m I_{alpha+m beta}|f|,
// compared node by node over the evaluation region.
inline DominationReport lipschitz_domination_check(const SymbolFunction& b, const GridOp& T, double alpha,
                                                   double beta, int m, const GridFunction& f) {
    require(m >= 1, "commutator order must be >= 1");
    const int dim = f.spec.dim;
    const double elevated = alpha + m * beta;
    require(elevated > 0.0 && elevated < dim,
            "lipschitz domination: alpha + m*beta must lie in (0, dim), got " + format_double(elevated, 6));

    const GridFunction num = higher_commutator(b.values, T, f, m);
    GridFunction absf(f.spec);
    for (std::size_t i = 0; i < absf.values.size(); ++i) absf.values[i] = std::fabs(f.values[i]);
    const GridFunction dom = fractional_integral(absf, elevated);

    DominationReport rep;
    rep.lip_norm_used = b.lip(beta);
    const double scale = std::pow(rep.lip_norm_used, m);
    const GridSpec& s = f.spec;
    for (int i0 = s.eval_lo(); i0 <= s.eval_hi(); ++i0) {
        const int j_lo = s.dim == 1 ? 0 : s.eval_lo();
        const int j_hi = s.dim == 1 ? 0 : s.eval_hi();
        for (int i1 = j_lo; i1 <= j_hi; ++i1) {
            const int flat = s.dim == 1 ? s.flat_index(i0) : s.flat_index(i0, i1);
            const double den = scale * dom.values[static_cast<std::size_t>(flat)];
            if (den < 1e-12) {
                ++rep.skipped;
                continue;
            }
            const double ratio = std::fabs(num.values[static_cast<std::size_t>(flat)]) / den;
            if (ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.argmax = {s.coord(i0), s.dim == 2 ? s.coord(i1) : 0.0};
            }
        }
    }
    return rep;
}

} // namespace fraclab
