#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fraclab/ball.hpp"
#include "fraclab/commutator.hpp"
#include "fraclab/corpus.hpp"
#include "fraclab/fracint.hpp"
#include "fraclab/norms.hpp"

namespace fraclab {

// Exponent bookkeeping for the commutator experiments: the full index window
// and the derived target pair (q, gamma).
struct IndexSet {
    int dim = 0;
    double alpha = 0.0;
    double p1 = 0.0, beta1 = 0.0;
    double p2 = 0.0, beta2 = 0.0;
    int m = 0;
    double q = 0.0, gamma = 0.0;
};

inline IndexSet derive_indices(int dim, double alpha, double p1, double beta1, double p2, double beta2, int m) {
    require(dim == 1 || dim == 2, "index window: dim must be 1 or 2");
    require(std::isfinite(alpha) && alpha > 0.0 && alpha < dim, "index window: alpha must lie in (0, dim)");
    require(std::isfinite(p2) && p2 > 1.0 && p2 < dim / alpha, "index window: p2 must lie in (1, dim/alpha)");
    require(std::isfinite(beta2) && beta2 >= -dim / p2 - 1e-12 && beta2 < -alpha,
            "index window: beta2 must lie in [-dim/p2, -alpha)");
    require(std::isfinite(p1) && p1 >= 1.0, "index window: p1 must lie in [1, inf)");
    require(std::isfinite(beta1) && beta1 >= -dim / p1 - 1e-12 && beta1 < 0.0,
            "index window: beta1 must lie in [-dim/p1, 0)");
    require(m >= 1, "index window: m must be a positive integer");

    const double inv_q = m / p1 + 1.0 / p2 - alpha / dim;
    require(inv_q > 0.0, "index window: q is not positive (alpha too large for these integrabilities)");
    const double q = 1.0 / inv_q;
    require(q >= 1.0 - 1e-12, "index window: q must be >= 1 (m too large for p1)");
    const double gamma = m * beta1 + beta2 + alpha;
    require(gamma >= -dim / q - 1e-12 && gamma < 0.0, "index window: gamma must lie in [-dim/q, 0)");

    IndexSet idx;
    idx.dim = dim;
    idx.alpha = alpha;
    idx.p1 = p1;
    idx.beta1 = beta1;
    idx.p2 = p2;
    idx.beta2 = beta2;
    idx.m = m;
    idx.q = q;
    idx.gamma = gamma;
    return idx;
}

struct RatioRow {
    std::string f_label;
    std::string b_label; // empty when the experiment has no symbol
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool skipped = false; // denominator under the floor; excluded from the max
};

struct RatioReport {
    std::string experiment;
    int N = 0;
    std::string family;
    // Index fields; NaN marks "not applicable to this experiment".
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double p1 = std::numeric_limits<double>::quiet_NaN();
    double beta1 = std::numeric_limits<double>::quiet_NaN();
    double p2 = std::numeric_limits<double>::quiet_NaN();
    double beta2 = std::numeric_limits<double>::quiet_NaN();
    int m = 0; // 0 marks "not applicable"
    double q = std::numeric_limits<double>::quiet_NaN();
    double gamma = std::numeric_limits<double>::quiet_NaN();
    std::vector<RatioRow> rows;
    double max_ratio = 0.0;
    std::int64_t skipped = 0;
};

namespace detail {

inline void push_ratio_row(RatioReport& rep, const std::string& f_label, const std::string& b_label, double lhs,
                           double rhs) {
    RatioRow row;
    row.f_label = f_label;
    row.b_label = b_label;
    row.lhs = lhs;
    row.rhs = rhs;
    if (rhs < 1e-12) {
        row.skipped = true;
        row.ratio = std::numeric_limits<double>::quiet_NaN();
        ++rep.skipped;
    } else {
        row.ratio = lhs / rhs;
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    }
    rep.rows.push_back(std::move(row));
}

} // namespace detail

enum class FracRoute { riesz, semigroup };

// Everything an experiment needs besides the functions themselves.
struct ExperimentContext {
    GridSpec spec;
    KernelFamily K;
    std::vector<Ball> balls;
    QuadratureSpec quad;
};

inline RadialStencil make_route_stencil(const ExperimentContext& ctx, double alpha, FracRoute route) {
    return route == FracRoute::riesz ? make_riesz_stencil(ctx.spec, alpha)
                                     : make_l_alpha_stencil(ctx.spec, ctx.K, alpha, ctx.quad);
}

// Lebesgue-to-Lebesgue ratio experiment: ||T f||_q / ||f||_p with the
// integrability lift 1/q = 1/p - alpha/dim.
inline RatioReport hls_experiment(const ExperimentContext& ctx, const SampledCorpus& corpus, double alpha, double p,
                                  FracRoute route, const std::string& experiment_id) {
    require(p > 1.0 && p < ctx.spec.dim / alpha, "hls: p must lie in (1, dim/alpha)");
    const double q = 1.0 / (1.0 / p - alpha / ctx.spec.dim);
    const RadialStencil T = make_route_stencil(ctx, alpha, route);

    RatioReport rep;
    rep.experiment = experiment_id;
    rep.N = ctx.spec.points_per_axis;
    rep.family = detail::family_fingerprint(ctx.balls);
    rep.alpha = alpha;
    rep.p2 = p;
    rep.q = q;
    for (std::size_t i = 0; i < corpus.functions.size(); ++i) {
        const double rhs = lp_norm(corpus.functions[i], p);
        const double lhs = lp_norm(convolve(corpus.functions[i], T), q);
        detail::push_ratio_row(rep, corpus.labels[i], "", lhs, rhs);
    }
    return rep;
}

// Morrey-to-Morrey ratio experiment with exponent shift beta -> alpha + beta.
inline RatioReport morrey_experiment(const ExperimentContext& ctx, const SampledCorpus& corpus, double alpha,
                                     double p, double beta, FracRoute route, const std::string& experiment_id) {
    require(p > 1.0 && p < ctx.spec.dim / alpha, "morrey experiment: p must lie in (1, dim/alpha)");
    require(beta >= -ctx.spec.dim / p - 1e-12 && beta < -alpha,
            "morrey experiment: beta must lie in [-dim/p, -alpha)");
    const double q = 1.0 / (1.0 / p - alpha / ctx.spec.dim);
    const RadialStencil T = make_route_stencil(ctx, alpha, route);

    RatioReport rep;
    rep.experiment = experiment_id;
    rep.N = ctx.spec.points_per_axis;
    rep.family = detail::family_fingerprint(ctx.balls);
    rep.alpha = alpha;
    rep.p2 = p;
    rep.beta2 = beta;
    rep.q = q;
    rep.gamma = alpha + beta;
    for (std::size_t i = 0; i < corpus.functions.size(); ++i) {
        const double rhs = morrey_norm(corpus.functions[i], p, beta, ctx.balls).value;
        const double lhs = morrey_norm(convolve(corpus.functions[i], T), q, alpha + beta, ctx.balls).value;
        detail::push_ratio_row(rep, corpus.labels[i], "", lhs, rhs);
    }
    return rep;
}

enum class CommutatorTarget { campanatoL, morrey };

// The central experiment: iterated commutator [b, L^{-alpha/2}]^m measured in
// the adapted Campanato (or Morrey) target against the product norm
// campanato(b)^m * morrey(f).
inline RatioReport commutator_experiment(const ExperimentContext& ctx, const SampledCorpus& f_corpus,
                                         const SampledCorpus& b_corpus, const IndexSet& idx,
                                         CommutatorTarget target, const std::string& experiment_id) {
    require(idx.dim == ctx.spec.dim, "commutator experiment: index set dimension does not match the grid");
    const RadialStencil stencil = make_l_alpha_stencil(ctx.spec, ctx.K, idx.alpha, ctx.quad);
    const GridOp T = [&stencil](const GridFunction& g) { return convolve(g, stencil); };

    RatioReport rep;
    rep.experiment = experiment_id;
    rep.N = ctx.spec.points_per_axis;
    rep.family = detail::family_fingerprint(ctx.balls);
    rep.alpha = idx.alpha;
    rep.p1 = idx.p1;
    rep.beta1 = idx.beta1;
    rep.p2 = idx.p2;
    rep.beta2 = idx.beta2;
    rep.m = idx.m;
    rep.q = idx.q;
    rep.gamma = idx.gamma;

    std::vector<double> morrey_f(f_corpus.functions.size());
    for (std::size_t i = 0; i < f_corpus.functions.size(); ++i)
        morrey_f[i] = morrey_norm(f_corpus.functions[i], idx.p2, idx.beta2, ctx.balls).value;

    for (std::size_t jb = 0; jb < b_corpus.functions.size(); ++jb) {
        const double camp_b = campanato_norm(b_corpus.functions[jb], idx.p1, idx.beta1, ctx.balls).value;
        const double camp_b_m = std::pow(camp_b, idx.m);
        for (std::size_t jf = 0; jf < f_corpus.functions.size(); ++jf) {
            const GridFunction cm = higher_commutator(b_corpus.functions[jb], T, f_corpus.functions[jf], idx.m);
            const double lhs = target == CommutatorTarget::campanatoL
                                   ? campanato_L_norm(cm, ctx.K, idx.q, idx.gamma, ctx.balls).value
                                   : morrey_norm(cm, idx.q, idx.gamma, ctx.balls).value;
            detail::push_ratio_row(rep, f_corpus.labels[jf], b_corpus.labels[jb], lhs, camp_b_m * morrey_f[jf]);
        }
    }
    if (rep.skipped == static_cast<std::int64_t>(rep.rows.size()))
        throw std::invalid_argument("commutator experiment: no usable pairs (all denominators vanish)");
    return rep;
}

// Inclusion comparison: adapted Campanato norm against the classical one,
// member by member.  gamma = 0 sits outside the comparison's hypothesis.
inline RatioReport inclusion_experiment(const ExperimentContext& ctx, const SampledCorpus& corpus, double p,
                                        double gamma, const std::string& experiment_id) {
    require(gamma != 0.0, "inclusion: the comparison requires gamma != 0");
    RatioReport rep;
    rep.experiment = experiment_id;
    rep.N = ctx.spec.points_per_axis;
    rep.family = detail::family_fingerprint(ctx.balls);
    rep.p2 = p;
    rep.gamma = gamma;
    for (std::size_t i = 0; i < corpus.functions.size(); ++i) {
        const double rhs = campanato_norm(corpus.functions[i], p, gamma, ctx.balls).value;
        const double lhs = campanato_L_norm(corpus.functions[i], ctx.K, p, gamma, ctx.balls).value;
        detail::push_ratio_row(rep, corpus.labels[i], "", lhs, rhs);
    }
    return rep;
}

// Direct discrete checks of the three oscillation estimates used by the
// commutator theorems: on a family containing a base ball and all its
// dyadic dilates,
//   (1) mean_B |b - b_B|            <= m(B)^{beta1/dim} ||b||
//   (2) mean_{2^k B} |b - b_B|      <= (2^dim+1) k m(2^k B)^{beta1/dim} ||b||
//   (3) mean_{2^k B} |b - b_B| |f|  <= (2^dim+1) k m(2^k B)^{(beta1+beta2)/dim} ||b|| ||f||
// with every norm measured by this library's own estimators on that family.
struct Lemma31Row {
    std::string b_label, f_label; // f_label empty for parts 1 and 2
    int part = 0;
    int k = 0;
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
    bool skipped = false;
};

struct Lemma31Report {
    std::vector<Lemma31Row> rows;
    std::array<double, 3> part_max{0.0, 0.0, 0.0};
    std::int64_t skipped = 0;
    std::vector<Ball> family;
};

inline Lemma31Report lemma31_check(const GridSpec& spec, const SampledCorpus& b_corpus,
                                   const SampledCorpus& f_corpus, double p1, double beta1, double p2, double beta2,
                                   int k_max, const std::vector<Ball>& base_balls) {
    require(k_max >= 1, "oscillation check: k_max must be >= 1");
    require(!base_balls.empty(), "oscillation check: no base balls");
    // Family: every base ball plus all its dyadic dilates, deduplicated.
    std::vector<Ball> family;
    for (const Ball& b : base_balls)
        for (int k = 0; k <= k_max; ++k) {
            Ball d{b.center, b.radius * std::pow(2.0, k)};
            require_ball(spec, d); // "ball does not fit" when a dilate escapes
            bool dup = false;
            for (const Ball& e : family)
                if (e.center == d.center && e.radius == d.radius) dup = true;
            if (!dup) family.push_back(d);
        }

    Lemma31Report rep;
    rep.family = family;
    const double dimf = static_cast<double>(spec.dim);
    const double chain_const = std::pow(2.0, dimf) + 1.0;

    std::vector<double> norm_f(f_corpus.functions.size());
    for (std::size_t i = 0; i < f_corpus.functions.size(); ++i)
        norm_f[i] = morrey_norm(f_corpus.functions[i], p2, beta2, family).value;

    const auto push = [&rep](Lemma31Row row) {
        if (row.rhs < 1e-12) {
            row.skipped = true;
            row.ratio = std::numeric_limits<double>::quiet_NaN();
            ++rep.skipped;
        } else {
            row.ratio = row.lhs / row.rhs;
            rep.part_max[static_cast<std::size_t>(row.part - 1)] =
                std::max(rep.part_max[static_cast<std::size_t>(row.part - 1)], row.ratio);
        }
        rep.rows.push_back(std::move(row));
    };

    for (std::size_t jb = 0; jb < b_corpus.functions.size(); ++jb) {
        const GridFunction& b = b_corpus.functions[jb];
        const double norm_b = campanato_norm(b, p1, beta1, family).value;
        for (const Ball& base : base_balls) {
            const double b_base = ball_average(b, base);

            Lemma31Row r1;
            r1.b_label = b_corpus.labels[jb];
            r1.part = 1;
            r1.lhs = ball_lp_mean(b, base, 1.0, true);
            r1.rhs = std::pow(discrete_measure(spec, base), beta1 / dimf) * norm_b;
            push(std::move(r1));

            for (int k = 1; k <= k_max; ++k) {
                const Ball big{base.center, base.radius * std::pow(2.0, k)};
                const double count = static_cast<double>(ball_point_count(spec, big));
                long double osc = 0.0L;
                for_each_ball_row(spec, big, [&](int i0, int j_lo, int j_hi) {
                    for (int j = j_lo; j <= j_hi; ++j)
                        osc += std::fabs((spec.dim == 1 ? b.at(j) : b.at(i0, j)) - b_base);
                });
                Lemma31Row r2;
                r2.b_label = b_corpus.labels[jb];
                r2.part = 2;
                r2.k = k;
                r2.lhs = static_cast<double>(osc) / count;
                r2.rhs = chain_const * k * std::pow(discrete_measure(spec, big), beta1 / dimf) * norm_b;
                push(std::move(r2));

                for (std::size_t jf = 0; jf < f_corpus.functions.size(); ++jf) {
                    const GridFunction& f = f_corpus.functions[jf];
                    long double mixed = 0.0L;
                    for_each_ball_row(spec, big, [&](int i0, int j_lo, int j_hi) {
                        for (int j = j_lo; j <= j_hi; ++j) {
                            const double bv = spec.dim == 1 ? b.at(j) : b.at(i0, j);
                            const double fv = spec.dim == 1 ? f.at(j) : f.at(i0, j);
                            mixed += std::fabs(bv - b_base) * std::fabs(fv);
                        }
                    });
                    Lemma31Row r3;
                    r3.b_label = b_corpus.labels[jb];
                    r3.f_label = f_corpus.labels[jf];
                    r3.part = 3;
                    r3.k = k;
                    r3.lhs = static_cast<double>(mixed) / count;
                    r3.rhs = chain_const * k *
                             std::pow(discrete_measure(spec, big), (beta1 + beta2) / dimf) * norm_b * norm_f[jf];
                    push(std::move(r3));
                }
            }
        }
    }
    return rep;
}

// Drift of a max-ratio sequence across resolutions, the artifact's stand-in
// for the theorems' existential constants.
struct DriftReport {
    std::vector<double> values;
    std::vector<double> drifts; // relative step-to-step changes
    double budget = 0.0;
    double max_drift = 0.0;
    bool pass = false;
};

inline DriftReport compute_drift(const std::vector<double>& values, double budget) {
    require(values.size() >= 2, "refinement study: need at least two resolutions");
    DriftReport rep;
    rep.values = values;
    rep.budget = budget;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double denom = std::max(std::fabs(values[i]), 1e-300);
        rep.drifts.push_back(std::fabs(values[i + 1] - values[i]) / denom);
        rep.max_drift = std::max(rep.max_drift, rep.drifts.back());
    }
    rep.pass = rep.max_drift < budget;
    return rep;
}

} // namespace fraclab
