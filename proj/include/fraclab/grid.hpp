#pragma once

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <functional>
#include <vector>

#include "fraclab/common.hpp"

namespace fraclab {

// Uniform node lattice on the box [-L, L]^dim with nodes x_i = -L + i*h,
// h = 2L/N, i = 0..N-1 per axis.  The outermost `margin` cells per side are
// excluded from the evaluation region [-L+Mh, L-Mh]^dim; operators are only
// trusted there.
struct GridSpec {
    int dim = 1;
    double half_extent = 1.0;   // L
    int points_per_axis = 16;   // N, power of two
    int margin = 0;             // M cells per side

    GridSpec() = default;
    GridSpec(int dim_, double half_extent_, int points_per_axis_, int margin_)
        : dim(dim_), half_extent(half_extent_), points_per_axis(points_per_axis_), margin(margin_) {
        require(dim == 1 || dim == 2, "grid: dim must be 1 or 2");
        require(half_extent > 0.0 && std::isfinite(half_extent), "grid: L must be positive and finite");
        require(points_per_axis >= 16, "grid: N must be at least 16");
        require(is_power_of_two(points_per_axis), "grid: N must be a power of two");
        require(margin >= 0, "grid: margin must be nonnegative");
        require(2 * margin < points_per_axis, "grid: margin too large (2M must be < N)");
    }

    double spacing() const { return 2.0 * half_extent / points_per_axis; }
    std::int64_t node_count() const {
        std::int64_t n = points_per_axis;
        return dim == 1 ? n : n * n;
    }
    double coord(int i) const { return -half_extent + i * spacing(); }

    // Evaluation-region index window per axis (closed).  For M >= 1 the top
    // index N-M sits exactly on the region boundary L - M h.
    int eval_lo() const { return margin; }
    int eval_hi() const { return std::min(points_per_axis - margin, points_per_axis - 1); }
    double region_lo() const { return -half_extent + margin * spacing(); }
    double region_hi() const { return half_extent - margin * spacing(); }

    std::int64_t flat_index(int i0, int i1 = 0) const {
        return dim == 1 ? i0 : static_cast<std::int64_t>(i0) * points_per_axis + i1;
    }
    std::array<double, 2> node(std::int64_t flat) const {
        if (dim == 1) return {coord(static_cast<int>(flat)), 0.0};
        int i0 = static_cast<int>(flat / points_per_axis);
        int i1 = static_cast<int>(flat % points_per_axis);
        return {coord(i0), coord(i1)};
    }
    std::array<int, 2> node_indices(std::int64_t flat) const {
        if (dim == 1) return {static_cast<int>(flat), 0};
        return {static_cast<int>(flat / points_per_axis), static_cast<int>(flat % points_per_axis)};
    }

    bool operator==(const GridSpec& o) const {
        return dim == o.dim && half_extent == o.half_extent &&
               points_per_axis == o.points_per_axis && margin == o.margin;
    }
};

struct GridFunction {
    GridSpec spec;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(const GridSpec& s, double fill = 0.0)
        : spec(s), values(static_cast<std::size_t>(s.node_count()), fill) {}

    double& at(int i0, int i1 = 0) { return values[static_cast<std::size_t>(spec.flat_index(i0, i1))]; }
    double at(int i0, int i1 = 0) const { return values[static_cast<std::size_t>(spec.flat_index(i0, i1))]; }
};

using PointFn = std::function<double(std::array<double, 2>)>;

// Pointwise sampler.  Rejects non-finite samples naming the offending node so
// corpus recipes with unmollified singularities fail loudly.
inline GridFunction sample(const GridSpec& spec, const PointFn& fn) {
    GridFunction f(spec);
    const auto n = spec.node_count();
    for (std::int64_t k = 0; k < n; ++k) {
        const auto p = spec.node(k);
        const double v = fn(p);
        if (!std::isfinite(v)) {
            throw std::invalid_argument("sample: non-finite value at node (" + format_double(p[0]) +
                                        (spec.dim == 2 ? ", " + format_double(p[1]) : std::string()) + ")");
        }
        f.values[static_cast<std::size_t>(k)] = v;
    }
    return f;
}

// Binary container: header dim, N, margin as little-endian int64, L as a
// little-endian float64, then N^dim float64 values in flat-index order.
static_assert(std::endian::native == std::endian::little, "serialization assumes a little-endian host");

inline void write_binary(const GridFunction& f, std::ostream& os) {
    auto put_i64 = [&os](std::int64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); };
    put_i64(f.spec.dim);
    put_i64(f.spec.points_per_axis);
    os.write(reinterpret_cast<const char*>(&f.spec.half_extent), 8);
    put_i64(f.spec.margin);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

inline void write_binary(const GridFunction& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    require(os.good(), "write_binary: cannot open " + path);
    write_binary(f, os);
    require(os.good(), "write_binary: write failed for " + path);
}

inline GridFunction read_binary(std::istream& is) {
    auto get_i64 = [&is]() {
        std::int64_t v = 0;
        is.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    const std::int64_t dim = get_i64();
    const std::int64_t n = get_i64();
    double extent = 0.0;
    is.read(reinterpret_cast<char*>(&extent), 8);
    const std::int64_t margin = get_i64();
    require(is.good(), "read_binary: truncated header");
    GridSpec spec(static_cast<int>(dim), extent, static_cast<int>(n), static_cast<int>(margin));
    GridFunction f(spec);
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    require(is.good(), "read_binary: truncated payload");
    return f;
}

inline GridFunction read_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(is.good(), "read_binary: cannot open " + path);
    return read_binary(is);
}

inline void write_csv(const GridFunction& f, std::ostream& os) {
    os << (f.spec.dim == 1 ? "x1,value\n" : "x1,x2,value\n");
    const auto n = f.spec.node_count();
    for (std::int64_t k = 0; k < n; ++k) {
        const auto p = f.spec.node(k);
        os << format_double(p[0]);
        if (f.spec.dim == 2) os << ',' << format_double(p[1]);
        os << ',' << format_double(f.values[static_cast<std::size_t>(k)]) << '\n';
    }
}

inline void write_csv(const GridFunction& f, const std::string& path) {
    std::ofstream os(path);
    require(os.good(), "write_csv: cannot open " + path);
    write_csv(f, os);
}

} // namespace fraclab
