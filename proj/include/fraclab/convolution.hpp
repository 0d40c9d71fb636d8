#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {
namespace detail {

// Iterative radix-2 FFT.  Sizes here are always powers of two (the padded
// lattice is 2N with N a power of two), so no general-size machinery is needed.
inline void fft_pow2(std::vector<std::complex<double>>& a, bool inverse,
                     const std::vector<std::complex<double>>& twiddle) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> w = twiddle[k * stride];
                if (inverse) w = std::conj(w);
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

inline std::vector<std::complex<double>> make_twiddle(std::size_t n) {
    std::vector<std::complex<double>> tw(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        tw[k] = {std::cos(ang), std::sin(ang)};
    }
    return tw;
}

// In-place FFT over a flat P x P array (dim=2) or length-P vector (dim=1).
inline void fft_nd(std::vector<std::complex<double>>& buf, int dim, int P, bool inverse) {
    const auto tw = make_twiddle(static_cast<std::size_t>(P));
    if (dim == 1) {
        fft_pow2(buf, inverse, tw);
        return;
    }
    std::vector<std::complex<double>> line(static_cast<std::size_t>(P));
    for (int r = 0; r < P; ++r) { // rows (contiguous)
        std::copy_n(buf.begin() + static_cast<std::ptrdiff_t>(r) * P, P, line.begin());
        fft_pow2(line, inverse, tw);
        std::copy_n(line.begin(), P, buf.begin() + static_cast<std::ptrdiff_t>(r) * P);
    }
    for (int c = 0; c < P; ++c) { // columns
        for (int r = 0; r < P; ++r) line[static_cast<std::size_t>(r)] = buf[static_cast<std::size_t>(r) * P + c];
        fft_pow2(line, inverse, tw);
        for (int r = 0; r < P; ++r) buf[static_cast<std::size_t>(r) * P + c] = line[static_cast<std::size_t>(r)];
    }
}

} // namespace detail

// Radial convolution stencil sampled on the full offset lattice
// [-(N-1), N-1]^dim and stored as its spectrum on the zero-padded 2N lattice.
// Zero padding makes the convolution linear (never circular): wrapped indices
// only ever meet padding zeros for outputs inside the box.
struct RadialStencil {
    GridSpec spec;
    std::vector<std::complex<double>> spectrum;
    double self_value = 0.0; // kernel at offset zero, kept for reports/tests
};

// profile(r) supplies the kernel at offset distance r > 0; the offset-zero
// cell takes self_value (regularized separately by the caller).
inline RadialStencil make_radial_stencil(const GridSpec& spec, const std::function<double(double)>& profile,
                                         double self_value) {
    const int N = spec.points_per_axis;
    const int P = 2 * N;
    const double h = spec.spacing();
    RadialStencil st;
    st.spec = spec;
    st.self_value = self_value;
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(spec.dim == 1 ? P : P * P));

    if (spec.dim == 1) {
        buf[0] = self_value;
        for (int d = 1; d <= N - 1; ++d) {
            const double v = profile(d * h);
            buf[static_cast<std::size_t>(d)] = v;
            buf[static_cast<std::size_t>(P - d)] = v;
        }
    } else {
        std::unordered_map<std::int64_t, double> memo;
        memo.reserve(8192);
        for (int d0 = -(N - 1); d0 <= N - 1; ++d0)
            for (int d1 = -(N - 1); d1 <= N - 1; ++d1) {
                double v;
                if (d0 == 0 && d1 == 0) {
                    v = self_value;
                } else {
                    const std::int64_t key = static_cast<std::int64_t>(d0) * d0 + static_cast<std::int64_t>(d1) * d1;
                    auto it = memo.find(key);
                    if (it == memo.end())
                        it = memo.emplace(key, profile(std::sqrt(static_cast<double>(key)) * h)).first;
                    v = it->second;
                }
                const int i0 = (d0 + P) % P;
                const int i1 = (d1 + P) % P;
                buf[static_cast<std::size_t>(i0) * P + i1] = v;
            }
    }
    detail::fft_nd(buf, spec.dim, P, false);
    st.spectrum = std::move(buf);
    return st;
}

// out(x) = h^dim * sum_y K(x - y) f(y) over the whole node set.
inline GridFunction convolve(const GridFunction& f, const RadialStencil& st) {
    require(f.spec == st.spec, "convolve: stencil was built for a different grid");
    const int N = f.spec.points_per_axis;
    const int P = 2 * N;
    const double weight = f.spec.dim == 1 ? f.spec.spacing() : f.spec.spacing() * f.spec.spacing();

    std::vector<std::complex<double>> buf(st.spectrum.size());
    if (f.spec.dim == 1) {
        for (int i = 0; i < N; ++i) buf[static_cast<std::size_t>(i)] = f.values[static_cast<std::size_t>(i)];
    } else {
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                buf[static_cast<std::size_t>(i) * P + j] = f.values[static_cast<std::size_t>(f.spec.flat_index(i, j))];
    }
    detail::fft_nd(buf, f.spec.dim, P, false);
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= st.spectrum[k];
    detail::fft_nd(buf, f.spec.dim, P, true);

    GridFunction out(f.spec);
    if (f.spec.dim == 1) {
        for (int i = 0; i < N; ++i) out.values[static_cast<std::size_t>(i)] = weight * buf[static_cast<std::size_t>(i)].real();
    } else {
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                out.values[static_cast<std::size_t>(f.spec.flat_index(i, j))] =
                    weight * buf[static_cast<std::size_t>(i) * P + j].real();
    }
    return out;
}

} // namespace fraclab
