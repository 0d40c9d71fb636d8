#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include "fraclab/config.hpp"
#include "fraclab/corpus.hpp"
#include "fraclab/harness.hpp"
#include "fraclab/report_io.hpp"

namespace fraclab {

inline std::filesystem::path resolve_out_dir(const RunConfig& cfg) {
    const char* env = std::getenv("FRACLAB_OUT");
    return std::filesystem::path(env && *env ? env : cfg.out_dir.c_str());
}

// Geometry scaled to a resolution N: the physical box, margin band, ball
// radii, and center spacing all stay fixed while the lattice refines, which
// is what makes ratios comparable across resolutions.
inline GridSpec spec_for_resolution(const RunConfig& cfg, int N) {
    const double scale = static_cast<double>(N) / cfg.N;
    const int margin = static_cast<int>(std::llround(cfg.margin * scale));
    return GridSpec(cfg.dim, cfg.L, N, margin);
}

inline double resolved_r_min(const RunConfig& cfg) {
    return cfg.ladder_r_min ? *cfg.ladder_r_min : 4.0 * cfg.L / cfg.N; // two spacings at the base N
}

inline std::vector<Ball> balls_for_spec(const RunConfig& cfg, const GridSpec& spec) {
    const int base_stride = cfg.ladder_stride > 0 ? cfg.ladder_stride : std::max(1, cfg.N / 32);
    const double scale = static_cast<double>(spec.points_per_axis) / cfg.N;
    const int stride = std::max(1, static_cast<int>(std::llround(base_stride * scale)));
    const BallLadder ladder(resolved_r_min(cfg), cfg.ladder_ratio, cfg.ladder_count, stride);
    return enumerate_balls(spec, ladder);
}

inline ExperimentContext make_context(const RunConfig& cfg, int N, double alpha) {
    ExperimentContext ctx;
    ctx.spec = spec_for_resolution(cfg, N);
    ctx.K = kernel_by_name(cfg.dim, cfg.kernel);
    ctx.balls = balls_for_spec(cfg, ctx.spec);
    ctx.quad = cfg.quad ? *cfg.quad : default_window(ctx.spec, ctx.K, alpha, cfg.quad_steps);
    return ctx;
}

inline const GridFunction& find_member(const SampledCorpus& corpus, const std::string& label,
                                       const std::string& role) {
    for (std::size_t i = 0; i < corpus.labels.size(); ++i)
        if (corpus.labels[i] == label) return corpus.functions[i];
    std::string have;
    for (const std::string& l : corpus.labels) have += (have.empty() ? "" : ", ") + l;
    throw std::invalid_argument("unknown " + role + " corpus member \"" + label + "\" (available: " + have + ")");
}

// ---------------------------------------------------------------------------
// Default experiment table (dimension-aware).  These are the index sets the
// README documents; an explicit [experiment] section replaces the whole list.
// ---------------------------------------------------------------------------

inline ExperimentConfig resolve_experiment_defaults(const RunConfig& cfg, ExperimentConfig e) {
    const bool d2 = cfg.dim == 2;
    if (std::isnan(e.alpha)) e.alpha = d2 ? 0.5 : 0.4;
    if (std::isnan(e.p1)) e.p1 = 4.0;
    if (std::isnan(e.beta1)) e.beta1 = d2 ? -0.25 : -0.2;
    if (std::isnan(e.p2)) e.p2 = 2.0;
    if (std::isnan(e.beta2)) e.beta2 = d2 ? -0.75 : -0.45;
    if (std::isnan(e.p)) e.p = 2.0;
    if (std::isnan(e.gamma)) e.gamma = d2 ? -0.5 : -0.25;
    return e;
}

inline std::vector<ExperimentConfig> default_experiments(const RunConfig& cfg) {
    std::vector<ExperimentConfig> out;
    const auto mk = [&cfg](const std::string& name, const std::string& kind) {
        ExperimentConfig e;
        e.name = name;
        e.kind = kind;
        return resolve_experiment_defaults(cfg, e);
    };
    ExperimentConfig m1 = mk("commutator-m1", "commutator");
    m1.m = 1;
    out.push_back(m1);
    ExperimentConfig m2 = mk("commutator-m2", "commutator");
    m2.m = 2;
    out.push_back(m2);
    ExperimentConfig cor = mk("commutator-corollary", "commutator");
    cor.m = 1;
    cor.beta2 = -cfg.dim / cor.p2; // the endpoint case: plain L^{p2} data
    out.push_back(cor);
    ExperimentConfig cm = mk("commutator-morrey", "commutator");
    cm.m = 1;
    cm.target = "morrey";
    out.push_back(cm);
    ExperimentConfig inc = mk("inclusion", "inclusion");
    out.push_back(inc);
    ExperimentConfig hr = mk("hls-riesz", "hls");
    hr.route = "riesz";
    out.push_back(hr);
    ExperimentConfig hs = mk("hls-semigroup", "hls");
    hs.route = "semigroup";
    out.push_back(hs);
    ExperimentConfig mr = mk("morrey-riesz", "morrey");
    mr.route = "riesz";
    out.push_back(mr);
    ExperimentConfig ms = mk("morrey-semigroup", "morrey");
    ms.route = "semigroup";
    out.push_back(ms);
    out.push_back(mk("oscillation-chain", "lemma31"));
    return out;
}

// Oscillation-chain geometry: the dyadic dilates need room, not kernel
// margin, so this uses a thin margin band and base balls near the box center.
inline GridSpec lemma31_spec(const RunConfig& cfg, int N) {
    return GridSpec(cfg.dim, cfg.L, N, std::max(1, N / 16));
}

inline std::vector<Ball> lemma31_base_balls(const RunConfig& cfg, const GridSpec& spec, int k_max) {
    const double r0 = resolved_r_min(cfg);
    const int N = spec.points_per_axis;
    std::vector<std::array<int, 2>> centers;
    if (spec.dim == 1) {
        centers = {{N / 2, 0}, {N / 2 - N / 8, 0}, {N / 2 + N / 8, 0}};
    } else {
        centers = {{N / 2, N / 2}, {N / 2 - N / 8, N / 2 + N / 16}, {N / 2 + N / 8, N / 2 - N / 16}};
    }
    std::vector<Ball> out;
    for (const auto& c : centers) {
        const Ball base{c, r0};
        const Ball top{c, r0 * std::pow(2.0, k_max)};
        if (ball_fits(spec, base) && ball_fits(spec, top)) out.push_back(base);
    }
    require(!out.empty(), "oscillation check: no base ball fits together with its 2^k dilates");
    return out;
}

// ---------------------------------------------------------------------------
// verify: the fast invariant suite.  Every check is pinned here (grids,
// exponents, tolerances) independent of the config file, so `fraclab verify`
// means the same thing in every checkout; the config only chooses the output
// directory.
// ---------------------------------------------------------------------------

namespace detail {

inline double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

inline std::vector<double> geometric(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / double(n - 1));
    return out;
}

inline double subordination_worst(int dim, const std::vector<double>& alphas) {
    const GridSpec spec(dim, 1.0, 256, 0);
    const double h = spec.spacing();
    const KernelFamily K = heat_kernel_family(dim, 1.0);
    double worst = 0.0;
    for (double alpha : alphas) {
        const QuadratureSpec q = default_window(K, alpha, h, 0.5);
        for (double r : geometric(h, 0.5, 33))
            worst = std::max(worst, rel_err(k_alpha_profile(K, alpha, r, q), riesz_kernel(dim, alpha, r)));
    }
    return worst;
}

inline double semigroup_law_worst(int dim, int N, int margin) {
    const GridSpec spec(dim, 1.0, N, margin);
    const KernelFamily K = heat_kernel_family(dim, 1.0);
    const double h = spec.spacing();
    const double t_hi = std::pow(margin * h / 8.0, 2.0);
    const SampledCorpus corpus = corpus_sample(corpus_generate(20260817, dim, "density"), spec);
    double worst = 0.0;
    for (double t : geometric(4.0 * h * h, t_hi, 6)) {
        for (const GridFunction& f : corpus.functions) {
            const GridFunction one = apply_semigroup(f, K, t);
            const GridFunction two = apply_semigroup(apply_semigroup(f, K, 0.5 * t), K, 0.5 * t);
            // Compare on the evaluation window only: outside it the two routes
            // truncate the composition bridge at the box boundary differently,
            // which is a property of the box, not of the semigroup law.
            for (int i0 = spec.eval_lo(); i0 <= spec.eval_hi(); ++i0) {
                if (spec.dim == 1) {
                    worst = std::max(worst, std::fabs(two.at(i0) - one.at(i0)));
                    continue;
                }
                for (int i1 = spec.eval_lo(); i1 <= spec.eval_hi(); ++i1)
                    worst = std::max(worst, std::fabs(two.at(i0, i1) - one.at(i0, i1)));
            }
        }
    }
    return worst;
}

inline double mass_worst(int dim, int N, int margin) {
    const GridSpec spec(dim, 1.0, N, margin);
    const KernelFamily K = heat_kernel_family(dim, 1.0);
    const double h = spec.spacing();
    const double t_hi = std::pow(margin * h / 8.0, 2.0);
    double worst = 0.0;
    for (double t : geometric(4.0 * h * h, t_hi, 8))
        worst = std::max(worst, std::fabs(kernel_mass(spec, K, t) - 1.0));
    return worst;
}

// Observed constant in the difference-kernel decay estimate: the kernel of
// (I - e^{-tL}) L^{-alpha/2} against the bound t / r^{dim+2-alpha}.
inline double difference_surrogate(int dim, double alpha, int steps) {
    const KernelFamily K = heat_kernel_family(dim, 1.0);
    double worst = 0.0;
    for (double t : geometric(1e-4, 1e-2, 12)) {
        for (double r : geometric(0.05, 1.0, 12)) {
            if (r * r < 4.0 * t) continue;
            QuadratureSpec q = difference_window(K, alpha, t, r, steps);
            q = QuadratureSpec(q.s_min, q.s_max, std::max(q.steps, steps));
            const double val = difference_kernel(K, alpha, t, r, q);
            worst = std::max(worst, std::fabs(val) * std::pow(r, dim + 2.0 - alpha) / t);
        }
    }
    return worst;
}

inline double commutator_routes_worst(int N = 32) {
    const GridSpec spec(1, 1.0, N, N / 8);
    const double alpha = 0.5;
    const SampledCorpus fs = corpus_sample(corpus_generate(20260817, 1, "density"), spec);
    const SampledCorpus bs = corpus_sample(corpus_generate(20260817, 1, "symbol"), spec);
    const RadialStencil st = make_riesz_stencil(spec, alpha);
    const GridOp T = [&st](const GridFunction& g) { return convolve(g, st); };
    const auto profile = [&spec, alpha](double r) { return riesz_kernel(spec.dim, alpha, r); };
    double worst = 0.0;
    for (int m = 1; m <= 3; ++m)
        for (std::size_t jb = 0; jb < bs.functions.size(); ++jb)
            for (std::size_t jf = 0; jf < fs.functions.size(); ++jf) {
                const GridFunction rec = higher_commutator(bs.functions[jb], T, fs.functions[jf], m);
                const GridFunction ker = kernel_commutator(bs.functions[jb], profile, fs.functions[jf], m);
                const double scale = std::max(1.0, sup_norm(ker));
                worst = std::max(worst, sup_norm(subtract(rec, ker)) / scale);
            }
    return worst;
}

inline double route_equivalence_worst(int dim, int N) {
    const GridSpec spec(dim, 1.0, N, N / 8);
    const KernelFamily K = heat_kernel_family(dim, 1.0);
    const double alpha = 0.5;
    const QuadratureSpec q = default_window(spec, K, alpha);
    const RadialStencil riesz = make_riesz_stencil(spec, alpha);
    const RadialStencil gen = make_l_alpha_stencil(spec, K, alpha, q);
    const SampledCorpus fs = corpus_sample(corpus_generate(20260817, dim, "density"), spec);
    double worst = 0.0;
    for (const GridFunction& f : fs.functions) {
        const GridFunction a = convolve(f, riesz);
        const GridFunction g = convolve(f, gen);
        const double denom = std::max(lp_norm(a, 2.0), 1e-300);
        worst = std::max(worst, lp_norm(subtract(g, a), 2.0) / denom);
    }
    return worst;
}

struct EstimatorDiff {
    double classical = 0.0;
    double adapted = 0.0;
    double bmo_equality = 0.0;
};

inline EstimatorDiff estimator_bruteforce_worst() {
    EstimatorDiff out;
    // Classical estimators on a roomy family.
    {
        const GridSpec spec(2, 1.0, 32, 4);
        const SampledCorpus fs = corpus_sample(corpus_generate(20260817, 2, "density"), spec);
        const BallLadder ladder(3.2 * spec.spacing(), 1.6, 3, 4);
        const std::vector<Ball> balls = enumerate_balls(spec, ladder);
        for (const GridFunction& f : fs.functions) {
            for (double p : {1.0, 2.0, 3.5}) {
                const double beta = -0.25;
                const NormEstimate fast = morrey_norm(f, p, beta, balls);
                double brute = 0.0;
                for (const Ball& b : balls)
                    brute = std::max(brute, std::pow(discrete_measure(spec, b), -beta / spec.dim) *
                                                ball_lp_mean(f, b, p, false));
                out.classical = std::max(out.classical, rel_err(fast.value, brute));

                const NormEstimate cfast = campanato_norm(f, p, beta, balls);
                double cbrute = 0.0;
                for (const Ball& b : balls)
                    cbrute = std::max(cbrute, std::pow(discrete_measure(spec, b), -beta / spec.dim) *
                                                  ball_lp_mean(f, b, p, true));
                out.classical = std::max(out.classical, rel_err(cfast.value, cbrute));
            }
            const double diff = std::fabs(campanato_norm(f, 1.0, 0.0, balls).value - bmo_norm(f, balls).value);
            out.bmo_equality = std::max(out.bmo_equality, diff);
        }
    }
    // Adapted estimators on an admissible (small-radius, wide-margin) family.
    {
        const GridSpec spec(2, 1.0, 32, 14);
        const KernelFamily K = kernel_by_name(2, "heat-a0.5");
        const SampledCorpus fs = corpus_sample(corpus_generate(20260817, 2, "density"), spec);
        const BallLadder ladder(1.3 * spec.spacing(), 1.2, 3, 1);
        const std::vector<Ball> balls = enumerate_balls(spec, ladder);
        for (const GridFunction& f : fs.functions) {
            for (double p : {1.0, 2.0}) {
                const double gamma = -0.5;
                const NormEstimate fast = campanato_L_norm(f, K, p, gamma, balls);
                double brute = 0.0;
                for (const Ball& b : balls) {
                    const GridFunction g = apply_semigroup(f, K, b.radius * b.radius);
                    const GridFunction d = subtract(f, g);
                    brute = std::max(brute, std::pow(discrete_measure(spec, b), -gamma / spec.dim) *
                                                ball_lp_mean(d, b, p, false));
                }
                out.adapted = std::max(out.adapted, rel_err(fast.value, brute));
            }
            const double diff =
                std::fabs(campanato_L_norm(f, K, 1.0, 0.0, balls).value - bmo_L_norm(f, K, balls).value);
            out.bmo_equality = std::max(out.bmo_equality, diff);

            // Sharp field against its definition: at every node, the max of
            // mean |f - e^{-r^2 L} f| over family balls containing it.
            const SharpFieldResult sharp = sharp_maximal_L(f, K, balls);
            GridFunction brute_field(spec);
            for (const Ball& b : balls) {
                const GridFunction g = apply_semigroup(f, K, b.radius * b.radius);
                const GridFunction d = subtract(f, g);
                const double mean = ball_lp_mean(d, b, 1.0, false);
                for (std::int64_t flat : ball_points(spec, b)) {
                    double& slot = brute_field.values[static_cast<std::size_t>(flat)];
                    slot = std::max(slot, mean);
                }
            }
            const double scale = sup_norm(f) + 1.0;
            for (std::size_t i = 0; i < brute_field.values.size(); ++i)
                out.adapted = std::max(out.adapted,
                                       std::fabs(brute_field.values[i] - sharp.field.values[i]) / scale);
        }
    }
    return out;
}

inline double index_roundtrip_worst() {
    double worst = 0.0;
    const auto check = [&worst](const IndexSet& idx) {
        worst = std::max(worst, std::fabs(1.0 / idx.q - (idx.m / idx.p1 + 1.0 / idx.p2 - idx.alpha / idx.dim)));
        worst = std::max(worst, std::fabs(idx.gamma - (idx.m * idx.beta1 + idx.beta2 + idx.alpha)));
    };
    check(derive_indices(2, 0.5, 4.0, -0.25, 2.0, -0.75, 1));
    check(derive_indices(2, 0.5, 4.0, -0.25, 2.0, -0.75, 2));
    check(derive_indices(2, 0.5, 4.0, -0.25, 2.0, -1.0, 1));
    check(derive_indices(1, 0.4, 4.0, -0.2, 2.0, -0.45, 1));
    return worst;
}

inline double lemma31_verify_worst() {
    RunConfig cfg; // defaults only: the verify suite is pinned
    cfg.dim = 1;
    cfg.N = 128;
    cfg.L = 1.0;
    const GridSpec spec = lemma31_spec(cfg, cfg.N);
    const SampledCorpus bs = corpus_sample(corpus_generate(cfg.seed, 1, "symbol"), spec);
    const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, 1, "density"), spec);
    const std::vector<Ball> base = lemma31_base_balls(cfg, spec, 3);
    const Lemma31Report rep = lemma31_check(spec, bs, fs, 4.0, -0.2, 2.0, -0.45, 3, base);
    return std::max({rep.part_max[0], rep.part_max[1], rep.part_max[2]});
}

} // namespace detail

inline int run_verify(const RunConfig& cfg, std::FILE* log = stdout) {
    const std::filesystem::path out_dir = resolve_out_dir(cfg);
    std::vector<CheckResult> checks;
    const auto add = [&checks](const std::string& name, double observed, double budget) {
        checks.push_back({name, observed <= budget, observed, budget});
    };

    add("subordination-dim1", detail::subordination_worst(1, {0.4, 0.5}), 1e-8);
    add("subordination-dim2", detail::subordination_worst(2, {0.4, 1.0}), 1e-8);

    {
        double worst = 0.0;
        nlohmann::ordered_json bounds = nlohmann::ordered_json::array();
        for (int dim : {1, 2})
            for (const std::string& name : {std::string("heat"), std::string("heat-a0.5")}) {
                const KernelFamily K = kernel_by_name(dim, name);
                const GaussianBoundReport rep = validate_gaussian_bound(
                    K, detail::geometric(1e-4, 1.0, 9), {0.0, 0.01, 0.1, 0.5, 1.0, 2.0});
                worst = std::max(worst, rep.max_ratio);
                nlohmann::ordered_json j = gaussian_bound_json(rep);
                j["dim"] = dim;
                bounds.push_back(j);
            }
        add("gaussian-bound", worst, 1.0 + 1e-9);
        write_text_file(out_dir / "gaussian-bound.json", bounds.dump(2) + "\n");
    }

    {
        // The Gaussian envelope as a generalized approximate identity: its
        // radial majorant must beat u^{-dim-eps} at infinity.
        double final_over_max = 0.0;
        bool ok = true;
        for (int dim : {1, 2}) {
            const KernelFamily K = heat_kernel_family(dim, 1.0);
            const MajorantProfile m{[&K](double u) { return K.gaussian_C * std::exp(-K.gaussian_A * u * u); }, 1.0};
            const ApproxIdentityReport rep = validate_approx_identity(m, dim, detail::geometric(0.01, 40.0, 64));
            ok = ok && rep.pass;
            final_over_max = std::max(final_over_max, rep.final_over_max);
        }
        checks.push_back({"approx-identity", ok, final_over_max, 1e-6});
    }

    add("semigroup-law", detail::semigroup_law_worst(1, 256, 64), 1e-8);
    add("mass-conservation-dim1", detail::mass_worst(1, 256, 64), 1e-8);
    add("mass-conservation-dim2", detail::mass_worst(2, 64, 24), 1e-8);

    {
        double worst_change = 0.0;
        for (int dim : {1, 2}) {
            const double c1 = detail::difference_surrogate(dim, 0.5, 512);
            const double c2 = detail::difference_surrogate(dim, 0.5, 1024);
            worst_change = std::max(worst_change, detail::rel_err(c2, c1));
        }
        add("difference-kernel-stability", worst_change, 0.05);
    }

    add("commutator-routes", detail::commutator_routes_worst(), 1e-10);
    add("route-equivalence", detail::route_equivalence_worst(1, 128), 1e-3);
    add("oscillation-chain", detail::lemma31_verify_worst(), 1.0 + 1e-9);

    {
        const detail::EstimatorDiff diff = detail::estimator_bruteforce_worst();
        add("estimator-bruteforce-classical", diff.classical, 1e-12);
        add("estimator-bruteforce-adapted", diff.adapted, 1e-12);
        add("campanato-bmo-equality", diff.bmo_equality, 0.0);
    }

    add("index-roundtrip", detail::index_roundtrip_worst(), 1e-14);

    bool all = true;
    for (const CheckResult& c : checks) all = all && c.pass;
    write_text_file(out_dir / "summary.json", summary_json("verify", checks).dump(2) + "\n");
    if (log)
        for (const CheckResult& c : checks)
            std::fprintf(log, "%s %s (observed %s, budget %s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                         format_double(c.observed, 6).c_str(), format_double(c.budget, 6).c_str());
    return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// report: configured experiments plus the refinement study over resolutions.
// ---------------------------------------------------------------------------

inline RatioReport run_ratio_experiment(const RunConfig& cfg, const ExperimentConfig& e, int N) {
    const FracRoute route = e.route == "riesz" ? FracRoute::riesz : FracRoute::semigroup;
    if (e.kind == "commutator") {
        const IndexSet idx = derive_indices(cfg.dim, e.alpha, e.p1, e.beta1, e.p2, e.beta2, e.m);
        const ExperimentContext ctx = make_context(cfg, N, idx.alpha);
        const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "density"), ctx.spec);
        const SampledCorpus bs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "symbol"), ctx.spec);
        const CommutatorTarget target =
            e.target == "morrey" ? CommutatorTarget::morrey : CommutatorTarget::campanatoL;
        return commutator_experiment(ctx, fs, bs, idx, target, e.name);
    }
    if (e.kind == "hls") {
        const ExperimentContext ctx = make_context(cfg, N, e.alpha);
        const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "density"), ctx.spec);
        return hls_experiment(ctx, fs, e.alpha, e.p, route, e.name);
    }
    if (e.kind == "morrey") {
        const ExperimentContext ctx = make_context(cfg, N, e.alpha);
        const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "density"), ctx.spec);
        return morrey_experiment(ctx, fs, e.alpha, e.p, e.beta2, route, e.name);
    }
    if (e.kind == "inclusion") {
        ExperimentContext ctx;
        ctx.spec = spec_for_resolution(cfg, N);
        ctx.K = kernel_by_name(cfg.dim, cfg.kernel);
        ctx.balls = balls_for_spec(cfg, ctx.spec);
        const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "density"), ctx.spec);
        return inclusion_experiment(ctx, fs, e.p, e.gamma, e.name);
    }
    throw std::invalid_argument("unknown experiment kind \"" + e.kind + "\"");
}

inline int run_report(const RunConfig& cfg, std::FILE* log = stdout) {
    const std::filesystem::path out_dir = resolve_out_dir(cfg);
    std::vector<ExperimentConfig> experiments;
    if (cfg.experiments.empty()) {
        experiments = default_experiments(cfg);
    } else {
        experiments.reserve(cfg.experiments.size());
        for (const ExperimentConfig& e : cfg.experiments)
            experiments.push_back(resolve_experiment_defaults(cfg, e));
    }

    std::vector<CheckResult> checks;
    for (const ExperimentConfig& e : experiments) {
        std::vector<int> resolutions = e.resolutions;
        if (resolutions.empty()) resolutions = {cfg.N, 2 * cfg.N};

        if (e.kind == "lemma31") {
            double worst = 0.0;
            for (int N : resolutions) {
                const GridSpec spec = lemma31_spec(cfg, N);
                const SampledCorpus bs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "symbol"), spec);
                const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "density"), spec);
                const std::vector<Ball> base = lemma31_base_balls(cfg, spec, e.k_max);
                const Lemma31Report rep =
                    lemma31_check(spec, bs, fs, e.p1, e.beta1, e.p2, e.beta2, e.k_max, base);
                worst = std::max({worst, rep.part_max[0], rep.part_max[1], rep.part_max[2]});
                write_text_file(out_dir / (e.name + "-" + std::to_string(N) + ".csv"), lemma31_csv(rep));
            }
            checks.push_back({e.name + "-bound", worst <= 1.0 + 1e-9, worst, 1.0 + 1e-9});
            continue;
        }

        std::vector<double> values;
        for (int N : resolutions) {
            const RatioReport rep = run_ratio_experiment(cfg, e, N);
            values.push_back(rep.max_ratio);
            write_text_file(out_dir / (e.name + "-" + std::to_string(N) + ".csv"), ratio_report_csv(rep));
        }
        const DriftReport drift = compute_drift(values, e.budget);
        checks.push_back({e.name + "-drift", drift.pass, drift.max_drift, e.budget});
    }

    bool all = true;
    for (const CheckResult& c : checks) all = all && c.pass;
    write_text_file(out_dir / "summary.json", summary_json("report", checks).dump(2) + "\n");
    if (log)
        for (const CheckResult& c : checks)
            std::fprintf(log, "%s %s (observed %s, budget %s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                         format_double(c.observed, 6).c_str(), format_double(c.budget, 6).c_str());
    return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Single-shot operator subcommands.
// ---------------------------------------------------------------------------

inline int run_evolve(const RunConfig& cfg) {
    const GridSpec spec = spec_for_resolution(cfg, cfg.N);
    const KernelFamily K = kernel_by_name(cfg.dim, cfg.kernel);
    const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "density"), spec);
    const GridFunction& f = find_member(fs, cfg.op.f, "density");
    if (time_is_coarse(spec, cfg.op.t))
        std::fprintf(stderr, "note: t = %s is below 4 h^2; the kernel is barely resolved at this N\n",
                     format_double(cfg.op.t, 6).c_str());
    const GridFunction g = apply_semigroup(f, K, cfg.op.t);
    const std::filesystem::path path = resolve_out_dir(cfg) / ("evolve-" + std::to_string(spec.points_per_axis) + ".csv");
    std::filesystem::create_directories(path.parent_path());
    write_csv(g, path.string());
    std::fprintf(stdout, "wrote %s\n", path.string().c_str());
    return 0;
}

inline int run_fracint(const RunConfig& cfg) {
    const GridSpec spec = spec_for_resolution(cfg, cfg.N);
    const KernelFamily K = kernel_by_name(cfg.dim, cfg.kernel);
    const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "density"), spec);
    const GridFunction& f = find_member(fs, cfg.op.f, "density");
    GridFunction g;
    if (cfg.op.route == "riesz") {
        g = fractional_integral(f, cfg.op.alpha);
    } else {
        const QuadratureSpec q = cfg.quad ? *cfg.quad : default_window(spec, K, cfg.op.alpha, cfg.quad_steps);
        g = l_alpha(f, K, cfg.op.alpha, q);
    }
    const std::filesystem::path path = resolve_out_dir(cfg) / ("fracint-" + std::to_string(spec.points_per_axis) + ".csv");
    std::filesystem::create_directories(path.parent_path());
    write_csv(g, path.string());
    std::fprintf(stdout, "wrote %s\n", path.string().c_str());
    return 0;
}

inline int run_commutator_cmd(const RunConfig& cfg) {
    const GridSpec spec = spec_for_resolution(cfg, cfg.N);
    const KernelFamily K = kernel_by_name(cfg.dim, cfg.kernel);
    const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "density"), spec);
    const SampledCorpus bs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "symbol"), spec);
    const GridFunction& f = find_member(fs, cfg.op.f, "density");
    const GridFunction& b = find_member(bs, cfg.op.b, "symbol");
    const QuadratureSpec q = cfg.quad ? *cfg.quad : default_window(spec, K, cfg.op.alpha, cfg.quad_steps);
    const RadialStencil st = cfg.op.route == "riesz" ? make_riesz_stencil(spec, cfg.op.alpha)
                                                     : make_l_alpha_stencil(spec, K, cfg.op.alpha, q);
    const GridOp T = [&st](const GridFunction& g) { return convolve(g, st); };
    const GridFunction c = higher_commutator(b, T, f, cfg.op.m);
    const std::filesystem::path path =
        resolve_out_dir(cfg) / ("commutator-" + std::to_string(spec.points_per_axis) + ".csv");
    std::filesystem::create_directories(path.parent_path());
    write_csv(c, path.string());
    std::fprintf(stdout, "wrote %s\n", path.string().c_str());
    return 0;
}

inline int run_norm(const RunConfig& cfg) {
    const GridSpec spec = spec_for_resolution(cfg, cfg.N);
    const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "density"), spec);
    const GridFunction& f = find_member(fs, cfg.op.f, "density");
    const std::filesystem::path out_dir = resolve_out_dir(cfg);
    const std::string suffix = std::to_string(spec.points_per_axis);

    nlohmann::ordered_json j;
    if (cfg.op.norm == "lp" || cfg.op.norm == "sup") {
        NormEstimate est;
        est.norm = cfg.op.norm;
        est.p = cfg.op.norm == "sup" ? std::numeric_limits<double>::infinity() : cfg.op.p;
        est.value = cfg.op.norm == "sup" ? sup_norm(f) : lp_norm(f, cfg.op.p);
        est.resolution = spec.points_per_axis;
        est.family = "evaluation-region";
        j = norm_estimate_json(est);
    } else if (cfg.op.norm == "lip") {
        const LipEstimate est = lip_norm(f, cfg.op.exponent);
        j["norm"] = "lip";
        j["exponent"] = cfg.op.exponent;
        j["value"] = est.value;
        j["pairs"] = est.pairs;
        j["exhaustive"] = est.exhaustive;
        j["N"] = spec.points_per_axis;
    } else if (cfg.op.norm == "type") {
        const TypeNormResult t = type_norm(f, cfg.op.p, cfg.op.rho);
        j["norm"] = "type";
        j["p"] = cfg.op.p;
        j["exponent"] = cfg.op.rho;
        j["value"] = t.value;
        j["boundary_weight_mass"] = t.boundary_weight_mass;
        j["N"] = spec.points_per_axis;
    } else {
        const std::vector<Ball> balls = balls_for_spec(cfg, spec);
        if (cfg.op.norm == "bmo") {
            j = norm_estimate_json(bmo_norm(f, balls));
        } else if (cfg.op.norm == "morrey") {
            j = norm_estimate_json(morrey_norm(f, cfg.op.p, cfg.op.exponent, balls));
        } else if (cfg.op.norm == "campanato") {
            j = norm_estimate_json(campanato_norm(f, cfg.op.p, cfg.op.exponent, balls));
        } else if (cfg.op.norm == "campanatoL") {
            j = norm_estimate_json(campanato_L_norm(f, kernel_by_name(cfg.dim, cfg.kernel), cfg.op.p,
                                                    cfg.op.exponent, balls));
        } else if (cfg.op.norm == "bmoL") {
            j = norm_estimate_json(bmo_L_norm(f, kernel_by_name(cfg.dim, cfg.kernel), balls));
        } else if (cfg.op.norm == "rh") {
            const SampledCorpus bs = corpus_sample(corpus_generate(cfg.seed, cfg.dim, "symbol"), spec);
            const RHInftyReport rep = rh_infty_ratio(find_member(bs, cfg.op.b, "symbol"), balls);
            j["norm"] = "rh-infinity";
            j["value"] = rep.max_ratio;
            j["skipped"] = rep.skipped;
            j["argmax_radius"] = rep.argmax.radius;
            j["N"] = spec.points_per_axis;
        } else if (cfg.op.norm == "sharp") {
            const SharpFieldResult sharp =
                sharp_maximal_L(f, kernel_by_name(cfg.dim, cfg.kernel), balls);
            if (sharp.uncovered > 0)
                std::fprintf(stderr, "note: %lld evaluation nodes lie in no family ball (field is 0 there)\n",
                             static_cast<long long>(sharp.uncovered));
            const std::filesystem::path path = out_dir / ("sharp-" + suffix + ".csv");
            std::filesystem::create_directories(path.parent_path());
            write_csv(sharp.field, path.string());
            std::fprintf(stdout, "wrote %s\n", path.string().c_str());
            return 0;
        } else {
            throw std::invalid_argument("unknown norm \"" + cfg.op.norm +
                                        "\" (available: lp, sup, lip, type, bmo, morrey, campanato, campanatoL, "
                                        "bmoL, rh, sharp)");
        }
    }
    const std::filesystem::path path = out_dir / ("norm-" + suffix + ".json");
    write_text_file(path, j.dump(2) + "\n");
    std::fprintf(stdout, "wrote %s\n", path.string().c_str());
    return 0;
}

inline int run_kernel_profile(const RunConfig& cfg) {
    const GridSpec spec = spec_for_resolution(cfg, cfg.N);
    const KernelFamily K = kernel_by_name(cfg.dim, cfg.kernel);
    const double h = spec.spacing();
    const double alpha = cfg.op.alpha;
    const QuadratureSpec q = cfg.quad ? *cfg.quad : default_window(K, alpha, h, 0.5 * cfg.L, cfg.quad_steps);
    std::string csv = "r,riesz,k_alpha,ratio\n";
    for (double r : detail::geometric(h, 0.5 * cfg.L, 33)) {
        const double rz = riesz_kernel(cfg.dim, alpha, r);
        const double ka = k_alpha_profile(K, alpha, r, q);
        csv += format_double(r) + "," + format_double(rz) + "," + format_double(ka) + "," +
               format_double(ka / rz) + "\n";
    }
    const std::filesystem::path path =
        resolve_out_dir(cfg) / ("kernel-profile-" + std::to_string(spec.points_per_axis) + ".csv");
    write_text_file(path, csv);
    std::fprintf(stdout, "wrote %s\n", path.string().c_str());
    return 0;
}

} // namespace fraclab
