#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fraclab/ball.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/semigroup.hpp"
#include "fraclab/summed_area.hpp"

namespace fraclab {

struct NormEstimate {
    std::string norm;
    double p = 0.0;
    double exponent = 0.0;
    double value = 0.0;
    std::array<double, 2> argmax_center{0.0, 0.0};
    double argmax_radius = 0.0;
    int resolution = 0;
    std::string family;
};

namespace detail {

inline std::string family_fingerprint(const std::vector<Ball>& balls) {
    if (balls.empty()) return "empty";
    double r_lo = balls.front().radius, r_hi = balls.front().radius;
    for (const Ball& b : balls) {
        r_lo = std::min(r_lo, b.radius);
        r_hi = std::max(r_hi, b.radius);
    }
    return "balls=" + std::to_string(balls.size()) + ",rmin=" + format_double(r_lo, 6) +
           ",rmax=" + format_double(r_hi, 6);
}

inline void record_argmax(NormEstimate& est, const GridSpec& spec, const Ball& b) {
    est.argmax_center = {spec.coord(b.center[0]), spec.dim == 2 ? spec.coord(b.center[1]) : 0.0};
    est.argmax_radius = b.radius;
}

// Zeroes everything outside the evaluation region.  Admissible balls never
// reach the margin band, so this changes no ball sum; what it buys is
// conditioning: semigroup differences are truncation-dominated (order one) on
// the band but can be near roundoff inside, and prefix sums that pass through
// the band would erase the interior signal during corner extraction.
inline void mask_to_evaluation_region(GridFunction& f) {
    const GridSpec& s = f.spec;
    const auto inside = [&s](int i) { return i >= s.eval_lo() && i <= s.eval_hi(); };
    for (int i0 = 0; i0 < s.points_per_axis; ++i0) {
        if (s.dim == 1) {
            if (!inside(i0)) f.values[static_cast<std::size_t>(i0)] = 0.0;
            continue;
        }
        for (int i1 = 0; i1 < s.points_per_axis; ++i1)
            if (!inside(i0) || !inside(i1)) f.values[static_cast<std::size_t>(s.flat_index(i0, i1))] = 0.0;
    }
}

} // namespace detail

inline double sup_norm(const GridFunction& f) {
    const GridSpec& s = f.spec;
    double m = 0.0;
    for (int i0 = s.eval_lo(); i0 <= s.eval_hi(); ++i0) {
        if (s.dim == 1) {
            m = std::max(m, std::fabs(f.at(i0)));
        } else {
            for (int i1 = s.eval_lo(); i1 <= s.eval_hi(); ++i1) m = std::max(m, std::fabs(f.at(i0, i1)));
        }
    }
    return m;
}

// Discrete L^p norm over the evaluation region, h^{dim/p} (sum |f|^p)^{1/p}.
// p may be infinity.
inline double lp_norm(const GridFunction& f, double p) {
    require(p >= 1.0, "lp norm: p must be >= 1");
    if (std::isinf(p)) return sup_norm(f);
    const GridSpec& s = f.spec;
    long double acc = 0.0L;
    for (int i0 = s.eval_lo(); i0 <= s.eval_hi(); ++i0) {
        if (s.dim == 1) {
            acc += abs_pow(f.at(i0), p);
        } else {
            for (int i1 = s.eval_lo(); i1 <= s.eval_hi(); ++i1) acc += abs_pow(f.at(i0, i1), p);
        }
    }
    const double cell = s.dim == 1 ? s.spacing() : s.spacing() * s.spacing();
    return std::pow(static_cast<double>(acc) * cell, 1.0 / p);
}

// Morrey norm: sup over the family of m(B)^{-beta/dim} times the uncentered
// p-mean on B.
inline NormEstimate morrey_norm(const GridFunction& f, double p, double beta, const std::vector<Ball>& balls) {
    require(p >= 1.0 && std::isfinite(p), "morrey: p must be finite and >= 1");
    require(beta >= -f.spec.dim / p - 1e-12 && beta <= 0.0, "morrey: beta must lie in [-dim/p, 0]");
    require(!balls.empty(), "morrey: empty ball family");
    const GridSpec& s = f.spec;
    const SummedAreaTable table(f, {p});
    NormEstimate est;
    est.norm = "morrey";
    est.p = p;
    est.exponent = beta;
    est.resolution = s.points_per_axis;
    est.family = detail::family_fingerprint(balls);
    for (const Ball& b : balls) {
        const double count = static_cast<double>(ball_point_count(s, b));
        const double mean = std::pow(table.ball_sum_abs_pow(p, b) / count, 1.0 / p);
        const double mhat = discrete_measure(s, b);
        const double v = std::pow(mhat, -beta / s.dim) * mean;
        if (v > est.value) {
            est.value = v;
            detail::record_argmax(est, s, b);
        }
    }
    return est;
}

// Campanato norm: sup of m(B)^{-beta/dim} times the centered p-mean, the
// center being the ball average.
inline NormEstimate campanato_norm(const GridFunction& f, double p, double beta, const std::vector<Ball>& balls) {
    require(p >= 1.0 && std::isfinite(p), "campanato: p must be finite and >= 1");
    require(beta >= -f.spec.dim / p - 1e-12 && beta <= 1.0, "campanato: beta must lie in [-dim/p, 1]");
    require(!balls.empty(), "campanato: empty ball family");
    const GridSpec& s = f.spec;
    const SummedAreaTable table(f, {});
    NormEstimate est;
    est.norm = "campanato";
    est.p = p;
    est.exponent = beta;
    est.resolution = s.points_per_axis;
    est.family = detail::family_fingerprint(balls);
    for (const Ball& b : balls) {
        const double count = static_cast<double>(ball_point_count(s, b));
        const double center = table.ball_sum(b) / count;
        long double acc = 0.0L;
        for_each_ball_row(s, b, [&](int i0, int j_lo, int j_hi) {
            for (int j = j_lo; j <= j_hi; ++j)
                acc += abs_pow((s.dim == 1 ? f.at(j) : f.at(i0, j)) - center, p);
        });
        const double mean = std::pow(static_cast<double>(acc) / count, 1.0 / p);
        const double mhat = discrete_measure(s, b);
        const double v = std::pow(mhat, -beta / s.dim) * mean;
        if (v > est.value) {
            est.value = v;
            detail::record_argmax(est, s, b);
        }
    }
    return est;
}

inline NormEstimate bmo_norm(const GridFunction& f, const std::vector<Ball>& balls) {
    NormEstimate est = campanato_norm(f, 1.0, 0.0, balls);
    est.norm = "bmo";
    return est;
}

struct LipEstimate {
    double value = 0.0;
    std::int64_t pairs = 0;
    bool exhaustive = false;
    std::array<double, 2> argmax_x{0.0, 0.0};
    std::array<double, 2> argmax_y{0.0, 0.0};
};

// Holder seminorm of order beta over evaluation-region nodes.  Exhaustive up
// to 4096 nodes; beyond that a fixed-stride subsample keeps at least a
// million pairs, deterministically.
inline LipEstimate lip_norm(const GridFunction& f, double beta) {
    require(beta > 0.0 && beta <= 1.0, "lip: beta must lie in (0, 1]");
    const GridSpec& s = f.spec;
    std::vector<int> flat;
    for (int i0 = s.eval_lo(); i0 <= s.eval_hi(); ++i0) {
        if (s.dim == 1) {
            flat.push_back(s.flat_index(i0));
        } else {
            for (int i1 = s.eval_lo(); i1 <= s.eval_hi(); ++i1) flat.push_back(s.flat_index(i0, i1));
        }
    }
    LipEstimate est;
    est.exhaustive = flat.size() <= 4096;
    if (!est.exhaustive) {
        const std::size_t stride = std::max<std::size_t>(1, flat.size() / 1500);
        std::vector<int> sampled;
        for (std::size_t k = 0; k < flat.size(); k += stride) sampled.push_back(flat[k]);
        flat.swap(sampled);
    }
    for (std::size_t a = 0; a < flat.size(); ++a) {
        const auto xa = s.node(flat[a]);
        const double pa = xa[0];
        const double qa = s.dim == 2 ? xa[1] : 0.0;
        const double va = f.values[static_cast<std::size_t>(flat[a])];
        for (std::size_t b = a + 1; b < flat.size(); ++b) {
            const auto xb = s.node(flat[b]);
            const double pb = xb[0];
            const double qb = s.dim == 2 ? xb[1] : 0.0;
            const double dist = std::sqrt((pa - pb) * (pa - pb) + (qa - qb) * (qa - qb));
            const double ratio = std::fabs(va - f.values[static_cast<std::size_t>(flat[b])]) / std::pow(dist, beta);
            ++est.pairs;
            if (ratio > est.value) {
                est.value = ratio;
                est.argmax_x = {pa, qa};
                est.argmax_y = {pb, qb};
            }
        }
    }
    return est;
}

// Smoothed snapshots e^{-r_j^2 L} f for every distinct radius of a ball
// family, shared by the semigroup-adapted estimators below.
struct AdaptedSnapshots {
    std::vector<double> radii;
    std::vector<GridFunction> smoothed;

    int index_of(double radius) const {
        for (std::size_t j = 0; j < radii.size(); ++j)
            if (radii[j] == radius) return static_cast<int>(j);
        throw std::invalid_argument("adapted snapshots: radius " + format_double(radius, 6) + " was not prepared");
    }
};

inline AdaptedSnapshots make_adapted_snapshots(const GridFunction& f, const KernelFamily& K,
                                               const std::vector<Ball>& balls) {
    require(!balls.empty(), "adapted snapshots: empty ball family");
    AdaptedSnapshots snap;
    for (const Ball& b : balls)
        if (std::find(snap.radii.begin(), snap.radii.end(), b.radius) == snap.radii.end())
            snap.radii.push_back(b.radius);
    std::sort(snap.radii.begin(), snap.radii.end());
    snap.smoothed.reserve(snap.radii.size());
    for (double r : snap.radii) snap.smoothed.push_back(apply_semigroup(f, K, r * r));
    return snap;
}

// Semigroup-adapted Campanato norm: the ball average is replaced by the
// semigroup snapshot at time r_B^2, so the comparison respects the operator
// rather than plain averaging.
inline NormEstimate campanato_L_norm(const GridFunction& f, const KernelFamily& K, double p, double gamma,
                                     const std::vector<Ball>& balls) {
    require(p >= 1.0 && std::isfinite(p), "adapted campanato: p must be finite and >= 1");
    require(gamma >= -f.spec.dim / p - 1e-12 && gamma <= 1.0,
            "adapted campanato: gamma must lie in [-dim/p, 1]");
    require(!balls.empty(), "adapted campanato: empty ball family");
    const GridSpec& s = f.spec;
    const AdaptedSnapshots snap = make_adapted_snapshots(f, K, balls);

    std::vector<SummedAreaTable> tables;
    tables.reserve(snap.radii.size());
    for (const GridFunction& g : snap.smoothed) {
        GridFunction diff(s);
        for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] = f.values[i] - g.values[i];
        detail::mask_to_evaluation_region(diff);
        tables.emplace_back(diff, std::vector<double>{p});
    }

    NormEstimate est;
    est.norm = "campanatoL";
    est.p = p;
    est.exponent = gamma;
    est.resolution = s.points_per_axis;
    est.family = detail::family_fingerprint(balls);
    for (const Ball& b : balls) {
        const int j = snap.index_of(b.radius);
        const double count = static_cast<double>(ball_point_count(s, b));
        const double mean = std::pow(tables[static_cast<std::size_t>(j)].ball_sum_abs_pow(p, b) / count, 1.0 / p);
        const double v = std::pow(discrete_measure(s, b), -gamma / s.dim) * mean;
        if (v > est.value) {
            est.value = v;
            detail::record_argmax(est, s, b);
        }
    }
    return est;
}

inline NormEstimate bmo_L_norm(const GridFunction& f, const KernelFamily& K, const std::vector<Ball>& balls) {
    NormEstimate est = campanato_L_norm(f, K, 1.0, 0.0, balls);
    est.norm = "bmoL";
    return est;
}

struct SharpFieldResult {
    GridFunction field;
    std::int64_t uncovered = 0; // evaluation-region nodes in no family ball
};

// Adapted sharp maximal field: at each node, the largest mean |f - e^{-r^2 L}f|
// over family balls containing that node.  Nodes covered by no ball stay 0
// and are counted for the caller to surface.
inline SharpFieldResult sharp_maximal_L(const GridFunction& f, const KernelFamily& K,
                                        const std::vector<Ball>& balls) {
    require(!balls.empty(), "sharp maximal: empty ball family");
    const GridSpec& s = f.spec;
    const AdaptedSnapshots snap = make_adapted_snapshots(f, K, balls);
    std::vector<SummedAreaTable> tables;
    tables.reserve(snap.radii.size());
    for (const GridFunction& g : snap.smoothed) {
        GridFunction diff(s);
        for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] = f.values[i] - g.values[i];
        detail::mask_to_evaluation_region(diff);
        tables.emplace_back(diff, std::vector<double>{1.0});
    }

    SharpFieldResult out{GridFunction(s), 0};
    std::vector<char> covered(static_cast<std::size_t>(s.node_count()), 0);
    for (const Ball& b : balls) {
        const int j = snap.index_of(b.radius);
        const double count = static_cast<double>(ball_point_count(s, b));
        const double mean = tables[static_cast<std::size_t>(j)].ball_sum_abs_pow(1.0, b) / count;
        for_each_ball_row(s, b, [&](int i0, int j_lo, int j_hi) {
            for (int jj = j_lo; jj <= j_hi; ++jj) {
                const int flat = s.dim == 1 ? s.flat_index(jj) : s.flat_index(i0, jj);
                covered[static_cast<std::size_t>(flat)] = 1;
                double& slot = out.field.values[static_cast<std::size_t>(flat)];
                slot = std::max(slot, mean);
            }
        });
    }
    for (int i0 = s.eval_lo(); i0 <= s.eval_hi(); ++i0) {
        if (s.dim == 1) {
            if (!covered[static_cast<std::size_t>(s.flat_index(i0))]) ++out.uncovered;
        } else {
            for (int i1 = s.eval_lo(); i1 <= s.eval_hi(); ++i1)
                if (!covered[static_cast<std::size_t>(s.flat_index(i0, i1))]) ++out.uncovered;
        }
    }
    return out;
}

struct TypeNormResult {
    double value = 0.0;
    // Mass of the weight (1+|x|)^{-dim-rho} outside the sampled box, reported
    // so callers can judge what the truncated sum ignores.
    double boundary_weight_mass = 0.0;
};

// Weighted L^p size over the whole box (margin included): functions of this
// type are exactly those the fractional integral tolerates at infinity.
inline TypeNormResult type_norm(const GridFunction& f, double p, double rho) {
    require(p >= 1.0 && std::isfinite(p), "type norm: p must be finite and >= 1");
    require(rho > 0.0 && std::isfinite(rho), "type norm: rho must be positive");
    const GridSpec& s = f.spec;
    long double acc = 0.0L;
    for (int i0 = 0; i0 < s.points_per_axis; ++i0) {
        const double x0 = s.coord(i0);
        if (s.dim == 1) {
            acc += abs_pow(f.at(i0), p) * std::pow(1.0 + std::fabs(x0), -s.dim - rho);
        } else {
            for (int i1 = 0; i1 < s.points_per_axis; ++i1) {
                const double x1 = s.coord(i1);
                const double w = std::pow(1.0 + std::sqrt(x0 * x0 + x1 * x1), -s.dim - rho);
                acc += abs_pow(f.at(i0, i1), p) * w;
            }
        }
    }
    const double cell = s.dim == 1 ? s.spacing() : s.spacing() * s.spacing();
    TypeNormResult out;
    out.value = std::pow(static_cast<double>(acc) * cell, 1.0 / p);
    const double L = s.half_extent;
    if (s.dim == 1) {
        out.boundary_weight_mass = 2.0 * std::pow(1.0 + L, -rho) / rho;
    } else {
        out.boundary_weight_mass = 2.0 * std::numbers::pi *
                                   (std::pow(1.0 + L, -rho) / rho - std::pow(1.0 + L, -1.0 - rho) / (1.0 + rho));
    }
    return out;
}

struct RHInftyReport {
    double max_ratio = 0.0;
    Ball argmax{};
    std::int64_t skipped = 0; // balls where b is constant to rounding
};

// Reverse-Holder-at-infinity ratio of a symbol: sup over balls of
// max_B |b - b_B| divided by mean_B |b - b_B|.  Balls where both sides
// vanish (constant symbol) are skipped and counted.
inline RHInftyReport rh_infty_ratio(const GridFunction& b, const std::vector<Ball>& balls) {
    require(!balls.empty(), "rh-infinity: empty ball family");
    const GridSpec& s = b.spec;
    const double scale = sup_norm(b) + 1.0;
    RHInftyReport rep;
    for (const Ball& ball : balls) {
        const double count = static_cast<double>(ball_point_count(s, ball));
        long double sum = 0.0L;
        for_each_ball_row(s, ball, [&](int i0, int j_lo, int j_hi) {
            for (int j = j_lo; j <= j_hi; ++j) sum += (s.dim == 1 ? b.at(j) : b.at(i0, j));
        });
        const double center = static_cast<double>(sum) / count;
        double peak = 0.0;
        long double dev = 0.0L;
        for_each_ball_row(s, ball, [&](int i0, int j_lo, int j_hi) {
            for (int j = j_lo; j <= j_hi; ++j) {
                const double d = std::fabs((s.dim == 1 ? b.at(j) : b.at(i0, j)) - center);
                peak = std::max(peak, d);
                dev += d;
            }
        });
        const double mean = static_cast<double>(dev) / count;
        if (peak <= 1e-14 * scale && mean <= 1e-14 * scale) {
            ++rep.skipped;
            continue;
        }
        const double ratio = peak / mean;
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.argmax = ball;
        }
    }
    if (rep.skipped == static_cast<std::int64_t>(balls.size()))
        throw std::invalid_argument("rh-infinity: symbol is constant on every family ball");
    return rep;
}

} // namespace fraclab
