#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {

// Lattice ball: Euclidean ball of physical radius `radius` about a node of
// the evaluation region.  Membership is strict (|node - center| < r) and is
// always decided by the one predicate below so every code path (brute-force,
// row iteration, summed-area queries) agrees bit-for-bit.
struct Ball {
    std::array<int, 2> center{0, 0}; // index per axis; center[1] unused for dim=1
    double radius = 0.0;
};

inline bool ball_contains_offset(const GridSpec& spec, const Ball& b, std::int64_t di, std::int64_t dj) {
    const double h = spec.spacing();
    return static_cast<double>(di * di + dj * dj) * h * h < b.radius * b.radius;
}

// Largest j >= 0 with (di^2 + j^2) h^2 < r^2, or -1 if the row misses the ball.
inline int ball_row_halfwidth(const GridSpec& spec, const Ball& b, int di) {
    const double h = spec.spacing();
    const double rem = b.radius * b.radius / (h * h) - static_cast<double>(di) * di;
    if (rem <= 0.0) return ball_contains_offset(spec, b, di, 0) ? 0 : -1;
    int j = static_cast<int>(std::floor(std::sqrt(rem)));
    while (j > 0 && !ball_contains_offset(spec, b, di, j)) --j;
    while (ball_contains_offset(spec, b, di, j + 1)) ++j;
    return ball_contains_offset(spec, b, di, j) ? j : -1;
}

inline int ball_max_offset(const GridSpec& spec, const Ball& b) {
    const double h = spec.spacing();
    int k = static_cast<int>(std::ceil(b.radius / h)) + 1;
    while (k > 0 && !ball_contains_offset(spec, b, k, 0)) --k;
    return k;
}

// Geometric fit: the ball must sit inside the evaluation region, center on an
// evaluation node, radius at least one spacing.  A 1e-9 slack keeps radii that
// land exactly on the region boundary from flapping with rounding.
inline bool ball_fits(const GridSpec& spec, const Ball& b) {
    constexpr double slack = 1e-9;
    const double h = spec.spacing();
    if (!(b.radius >= h * (1.0 - 1e-12))) return false;
    for (int ax = 0; ax < spec.dim; ++ax) {
        const int c = b.center[static_cast<std::size_t>(ax)];
        if (c < spec.eval_lo() || c > spec.eval_hi()) return false;
        const double x = spec.coord(c);
        if (x - b.radius < spec.region_lo() - slack) return false;
        if (x + b.radius > spec.region_hi() + slack) return false;
    }
    return true;
}

inline void require_ball(const GridSpec& spec, const Ball& b) {
    require(ball_fits(spec, b), "ball does not fit the evaluation region (center (" +
                                    std::to_string(b.center[0]) +
                                    (spec.dim == 2 ? "," + std::to_string(b.center[1]) : std::string()) +
                                    "), radius " + format_double(b.radius) + ")");
}

// Visits the ball row by row: fn(i0, j_lo, j_hi) covers nodes (i0, j) with
// j in [j_lo, j_hi] (dim=1 calls fn once with the segment on axis 0).
template <typename Fn>
inline void for_each_ball_row(const GridSpec& spec, const Ball& b, Fn&& fn) {
    if (spec.dim == 1) {
        const int half = ball_max_offset(spec, b);
        fn(0, b.center[0] - half, b.center[0] + half);
        return;
    }
    const int half0 = ball_max_offset(spec, b);
    for (int di = -half0; di <= half0; ++di) {
        const int w = ball_row_halfwidth(spec, b, di);
        if (w < 0) continue;
        fn(b.center[0] + di, b.center[1] - w, b.center[1] + w);
    }
}

inline std::vector<std::int64_t> ball_points(const GridSpec& spec, const Ball& b) {
    require_ball(spec, b);
    std::vector<std::int64_t> out;
    for_each_ball_row(spec, b, [&](int i0, int j_lo, int j_hi) {
        for (int j = j_lo; j <= j_hi; ++j)
            out.push_back(spec.dim == 1 ? spec.flat_index(j) : spec.flat_index(i0, j));
    });
    return out;
}

inline std::int64_t ball_point_count(const GridSpec& spec, const Ball& b) {
    std::int64_t n = 0;
    for_each_ball_row(spec, b, [&](int, int j_lo, int j_hi) { n += j_hi - j_lo + 1; });
    return n;
}

// Discrete measure used by every estimator: node count times h^dim.
inline double discrete_measure(const GridSpec& spec, std::int64_t count) {
    const double h = spec.spacing();
    return static_cast<double>(count) * (spec.dim == 1 ? h : h * h);
}
inline double discrete_measure(const GridSpec& spec, const Ball& b) {
    return discrete_measure(spec, ball_point_count(spec, b));
}

inline double ball_average(const GridFunction& f, const Ball& b) {
    require_ball(f.spec, b);
    double sum = 0.0;
    std::int64_t n = 0;
    for_each_ball_row(f.spec, b, [&](int i0, int j_lo, int j_hi) {
        for (int j = j_lo; j <= j_hi; ++j)
            sum += f.spec.dim == 1 ? f.values[static_cast<std::size_t>(j)]
                                   : f.values[static_cast<std::size_t>(f.spec.flat_index(i0, j))];
        n += j_hi - j_lo + 1;
    });
    return sum / static_cast<double>(n);
}

inline double abs_pow(double v, double p) {
    if (p == 1.0) return std::fabs(v);
    if (p == 2.0) return v * v;
    return std::pow(std::fabs(v), p);
}

// (mean over ball of |f - c|^p)^(1/p); c = ball average when centered, else 0.
inline double ball_lp_mean(const GridFunction& f, const Ball& b, double p, bool centered) {
    require(p >= 1.0, "ball_lp_mean: p must be >= 1");
    require_ball(f.spec, b);
    const double c = centered ? ball_average(f, b) : 0.0;
    double sum = 0.0;
    std::int64_t n = 0;
    for_each_ball_row(f.spec, b, [&](int i0, int j_lo, int j_hi) {
        for (int j = j_lo; j <= j_hi; ++j) {
            const double v = f.spec.dim == 1 ? f.values[static_cast<std::size_t>(j)]
                                             : f.values[static_cast<std::size_t>(f.spec.flat_index(i0, j))];
            sum += abs_pow(v - c, p);
        }
        n += j_hi - j_lo + 1;
    });
    const double mean = sum / static_cast<double>(n);
    return p == 1.0 ? mean : (p == 2.0 ? std::sqrt(mean) : std::pow(mean, 1.0 / p));
}

// Geometric ladder of radii with centers on a stride sublattice of the
// evaluation region.  Families built from it approximate sup-over-balls from
// below; estimates can only grow as the family grows.
struct BallLadder {
    double r_min = 0.0;
    double ratio = 2.0;
    int count = 3;        // J
    int center_stride = 1;

    BallLadder() = default;
    BallLadder(double r_min_, double ratio_, int count_, int stride_)
        : r_min(r_min_), ratio(ratio_), count(count_), center_stride(stride_) {
        require(r_min > 0.0 && std::isfinite(r_min), "ladder: r_min must be positive");
        require(ratio > 1.0, "ladder: ratio must exceed 1");
        require(count >= 3, "ladder: at least 3 radii required");
        require(center_stride >= 1, "ladder: stride must be >= 1");
    }

    double radius(int j) const { return r_min * std::pow(ratio, j); }
};

// Radius-major (ascending), then lexicographic in the center indices.
inline std::vector<Ball> enumerate_balls(const GridSpec& spec, const BallLadder& ladder) {
    std::vector<Ball> out;
    std::vector<int> centers;
    for (int i = spec.eval_lo(); i <= spec.eval_hi(); i += ladder.center_stride) centers.push_back(i);
    for (int j = 0; j < ladder.count; ++j) {
        const double r = ladder.radius(j);
        if (spec.dim == 1) {
            for (int c : centers) {
                Ball b{{c, 0}, r};
                if (ball_fits(spec, b)) out.push_back(b);
            }
        } else {
            for (int c0 : centers)
                for (int c1 : centers) {
                    Ball b{{c0, c1}, r};
                    if (ball_fits(spec, b)) out.push_back(b);
                }
        }
    }
    require(!out.empty(), "enumerate_balls: no admissible balls for this ladder");
    return out;
}

} // namespace fraclab
