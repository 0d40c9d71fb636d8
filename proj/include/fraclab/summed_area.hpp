#pragma once

#include <vector>

#include "fraclab/ball.hpp"

namespace fraclab {

// Inclusive prefix sums of a grid field and of |field|^p for a declared list
// of exponents.  Accumulation and storage use long double so that differencing
// two large prefixes stays within 1e-12 of the direct sum even when a small
// query sits inside a large grid.
class SummedAreaTable {
  public:
    SummedAreaTable(const GridFunction& f, std::vector<double> exponents = {})
        : spec_(f.spec), exponents_(std::move(exponents)) {
        tables_.resize(exponents_.size() + 1);
        build(f.values, 0, [](double v) { return v; });
        for (std::size_t e = 0; e < exponents_.size(); ++e) {
            const double p = exponents_[e];
            require(p >= 1.0, "summed-area: exponents must be >= 1");
            build(f.values, e + 1, [p](double v) { return abs_pow(v, p); });
        }
    }

    const GridSpec& spec() const { return spec_; }

    // Inclusive index box [lo0,hi0] x [lo1,hi1] (axis 1 ignored for dim=1).
    double rect_sum(int lo0, int hi0, int lo1 = 0, int hi1 = 0) const { return rect(0, lo0, hi0, lo1, hi1); }
    double rect_sum_abs_pow(double p, int lo0, int hi0, int lo1 = 0, int hi1 = 0) const {
        return rect(table_for(p), lo0, hi0, lo1, hi1);
    }

    double ball_sum(const Ball& b) const { return ball(0, b); }
    double ball_sum_abs_pow(double p, const Ball& b) const { return ball(table_for(p), b); }

  private:
    template <typename Map>
    void build(const std::vector<double>& v, std::size_t slot, Map&& map) {
        const int n = spec_.points_per_axis;
        auto& t = tables_[slot];
        t.assign(v.size(), 0.0L);
        if (spec_.dim == 1) {
            long double acc = 0.0L;
            for (int i = 0; i < n; ++i) {
                acc += map(v[static_cast<std::size_t>(i)]);
                t[static_cast<std::size_t>(i)] = acc;
            }
            return;
        }
        for (int i = 0; i < n; ++i) {
            long double row = 0.0L;
            for (int j = 0; j < n; ++j) {
                const auto k = static_cast<std::size_t>(spec_.flat_index(i, j));
                row += map(v[k]);
                t[k] = row + (i > 0 ? t[static_cast<std::size_t>(spec_.flat_index(i - 1, j))] : 0.0L);
            }
        }
    }

    std::size_t table_for(double p) const {
        for (std::size_t e = 0; e < exponents_.size(); ++e)
            if (exponents_[e] == p) return e + 1;
        throw std::invalid_argument("summed-area: exponent " + format_double(p) + " was not declared");
    }

    long double at(std::size_t slot, int i, int j) const {
        if (i < 0 || j < 0) return 0.0L;
        return tables_[slot][static_cast<std::size_t>(spec_.flat_index(i, j))];
    }

    double rect(std::size_t slot, int lo0, int hi0, int lo1, int hi1) const {
        const int n = spec_.points_per_axis;
        require(lo0 >= 0 && hi0 < n && lo0 <= hi0, "summed-area: axis-0 range out of bounds");
        if (spec_.dim == 1) {
            const auto& t = tables_[slot];
            const long double top = t[static_cast<std::size_t>(hi0)];
            const long double bot = lo0 > 0 ? t[static_cast<std::size_t>(lo0 - 1)] : 0.0L;
            return static_cast<double>(top - bot);
        }
        require(lo1 >= 0 && hi1 < n && lo1 <= hi1, "summed-area: axis-1 range out of bounds");
        const long double s = at(slot, hi0, hi1) - at(slot, lo0 - 1, hi1) -
                              at(slot, hi0, lo1 - 1) + at(slot, lo0 - 1, lo1 - 1);
        return static_cast<double>(s);
    }

    double ball(std::size_t slot, const Ball& b) const {
        require_ball(spec_, b);
        long double s = 0.0L;
        for_each_ball_row(spec_, b, [&](int i0, int j_lo, int j_hi) {
            if (spec_.dim == 1)
                s += at(slot, j_hi, 0) - at(slot, j_lo - 1, 0);
            else
                s += at(slot, i0, j_hi) - at(slot, i0 - 1, j_hi) -
                     at(slot, i0, j_lo - 1) + at(slot, i0 - 1, j_lo - 1);
        });
        return static_cast<double>(s);
    }

    GridSpec spec_;
    std::vector<double> exponents_;
    std::vector<std::vector<long double>> tables_;
};

} // namespace fraclab
