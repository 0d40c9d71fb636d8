#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {

// A corpus member is an analytic recipe, not a sampled array: the same member
// can be sampled on any grid, which is what refinement and dilation
// experiments need for comparability across resolutions.
struct CorpusMember {
    std::string label;
    PointFn fn;
};

namespace detail {

// Uniform draws built directly from raw mt19937_64 output.  std::uniform_real
// distributions are implementation-defined, and corpus reproducibility has to
// survive standard-library changes.
struct CorpusRng {
    std::mt19937_64 eng;
    explicit CorpusRng(std::uint64_t seed) : eng(seed) {}
    double u() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    double sym() { return 2.0 * u() - 1.0; }
};

inline double sq_norm(const std::array<double, 2>& x) { return x[0] * x[0] + x[1] * x[1]; }

} // namespace detail

// Deterministic corpus: eight members per role, first member always the
// constant control.  Density members target Morrey classes with negative
// exponents (mollified power singularities, bumps, band-limited trig,
// smoothed steps); symbol members additionally cover Holder-rough profiles
// (|x|^{1/2}, cones) for Campanato and Lipschitz experiments.  Mollification
// and frequency scales are fixed in physical units so every grid from N = 32
// up resolves them.
inline std::vector<CorpusMember> corpus_generate(std::uint64_t seed, int dim, const std::string& role) {
    require(dim == 1 || dim == 2, "corpus: dim must be 1 or 2");
    require(role == "density" || role == "symbol", "corpus: role must be \"density\" or \"symbol\"");
    const bool density = role == "density";
    detail::CorpusRng rng(seed ^ (density ? 0x64656e73697479ULL : 0x73796d626f6cULL));

    // Negative-power exponents matched to the default index sets per
    // dimension so the singular members sit inside the target classes.
    const double a_density = dim == 2 ? 0.75 : 0.45;
    const double a_symbol = dim == 2 ? 0.25 : 0.20;
    const double moll = 0.05; // tip mollification, resolved from h = 1/32 up

    std::vector<CorpusMember> out;
    out.reserve(8);
    out.push_back({"const", [](std::array<double, 2>) { return 1.0; }});

    // All random parameters are drawn in a fixed order up front.
    const double sigma0 = 0.25 + 0.1 * rng.u();
    const double cx = 0.35 * rng.sym(), cy = 0.35 * rng.sym();
    const double sigma1 = 0.12 + 0.06 * rng.u();
    // Singular tip anchored on a node of every grid with h <= 1/32.
    const double sx = std::floor(6.0 * rng.sym()) / 32.0;
    const double sy = std::floor(6.0 * rng.sym()) / 32.0;
    struct TrigTerm {
        double c, k0, k1, phase;
    };
    std::vector<TrigTerm> trig(4);
    for (auto& tt : trig) {
        tt.c = rng.sym();
        tt.k0 = 1.0 + std::floor(3.0 * rng.u());
        tt.k1 = 1.0 + std::floor(3.0 * rng.u());
        tt.phase = 2.0 * std::numbers::pi * rng.u();
    }
    const double ridge_w = 0.08 + 0.04 * rng.u();
    const double bx = 0.3 * rng.sym(), by = 0.3 * rng.sym();
    const double packet_k = 3.0 + std::floor(3.0 * rng.u());

    if (density) {
        out.push_back({"bump", [sigma0](std::array<double, 2> x) {
                           return std::exp(-detail::sq_norm(x) / (2.0 * sigma0 * sigma0));
                       }});
        out.push_back({"bump-off", [cx, cy, sigma1, dim](std::array<double, 2> x) {
                           const double d0 = x[0] - cx;
                           const double d1 = dim == 2 ? x[1] - cy : 0.0;
                           return std::exp(-(d0 * d0 + d1 * d1) / (2.0 * sigma1 * sigma1));
                       }});
        out.push_back({"singular", [sx, sy, a_density, moll, dim](std::array<double, 2> x) {
                           const double d0 = x[0] - sx;
                           const double d1 = dim == 2 ? x[1] - sy : 0.0;
                           return std::pow(d0 * d0 + d1 * d1 + moll * moll, -0.5 * a_density);
                       }});
        out.push_back({"trig", [trig](std::array<double, 2> x) {
                           double v = 0.0;
                           for (const auto& tt : trig)
                               v += tt.c * std::cos(std::numbers::pi * (tt.k0 * x[0] + tt.k1 * x[1]) + tt.phase);
                           return v;
                       }});
        out.push_back({"ridge", [ridge_w](std::array<double, 2> x) { return std::tanh(x[0] / ridge_w); }});
        out.push_back({"twobump", [cx, cy, bx, by, dim](std::array<double, 2> x) {
                           const double u0 = x[0] - cx, u1 = dim == 2 ? x[1] - cy : 0.0;
                           const double v0 = x[0] - bx, v1 = dim == 2 ? x[1] - by : 0.0;
                           return std::exp(-(u0 * u0 + u1 * u1) / (2.0 * 0.18 * 0.18)) -
                                  0.7 * std::exp(-(v0 * v0 + v1 * v1) / (2.0 * 0.22 * 0.22));
                       }});
        out.push_back({"packet", [packet_k](std::array<double, 2> x) {
                           return std::cos(2.0 * std::numbers::pi * packet_k * x[0]) *
                                  std::exp(-detail::sq_norm(x) / (2.0 * 0.15 * 0.15));
                       }});
    } else {
        out.push_back({"linear", [](std::array<double, 2> x) { return x[0]; }});
        out.push_back({"root", [](std::array<double, 2> x) { return std::pow(detail::sq_norm(x), 0.25); }});
        out.push_back({"negpower", [sx, sy, a_symbol, moll, dim](std::array<double, 2> x) {
                           const double d0 = x[0] - sx;
                           const double d1 = dim == 2 ? x[1] - sy : 0.0;
                           return std::pow(d0 * d0 + d1 * d1 + moll * moll, -0.5 * a_symbol);
                       }});
        out.push_back({"trig", [trig](std::array<double, 2> x) {
                           double v = 0.0;
                           for (const auto& tt : trig)
                               v += tt.c * std::cos(std::numbers::pi * (tt.k0 * x[0] + tt.k1 * x[1]) + tt.phase);
                           return v;
                       }});
        out.push_back({"ridge", [ridge_w](std::array<double, 2> x) { return std::tanh(x[0] / ridge_w); }});
        out.push_back({"bump", [sigma0](std::array<double, 2> x) {
                           return std::exp(-detail::sq_norm(x) / (2.0 * sigma0 * sigma0));
                       }});
        out.push_back({"cone", [](std::array<double, 2> x) { return std::sqrt(detail::sq_norm(x)); }});
    }
    return out;
}

// Samples every member on a grid, keeping labels.
struct SampledCorpus {
    std::vector<std::string> labels;
    std::vector<GridFunction> functions;
};

inline SampledCorpus corpus_sample(const std::vector<CorpusMember>& members, const GridSpec& spec) {
    SampledCorpus out;
    out.labels.reserve(members.size());
    out.functions.reserve(members.size());
    for (const CorpusMember& m : members) {
        out.labels.push_back(m.label);
        out.functions.push_back(sample(spec, m.fn));
    }
    return out;
}

// The dilated member x -> f(lambda x), for dilation-invariance experiments.
inline CorpusMember dilate_member(const CorpusMember& m, double lambda) {
    require(lambda > 0.0 && std::isfinite(lambda), "corpus: dilation factor must be positive");
    PointFn inner = m.fn;
    return {m.label + "-dil" + format_double(lambda, 3),
            [inner, lambda](std::array<double, 2> x) { return inner({lambda * x[0], lambda * x[1]}); }};
}

} // namespace fraclab
