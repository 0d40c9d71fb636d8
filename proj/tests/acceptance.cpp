// End-to-end acceptance run: ten numbered criteria, one PASS/FAIL line each,
// tolerances pinned in this file.  Exit status is the number of failures.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fraclab/runner.hpp>

namespace {

int failures = 0;

void report(int id, const char* what, bool pass, double observed, double budget) {
    std::printf("[%s] criterion %d: %s (observed %.6g, budget %.6g)\n", pass ? "PASS" : "FAIL", id, what,
                observed, budget);
    std::fflush(stdout);
    if (!pass) ++failures;
}

void report_error(int id, const char* what, const std::exception& e) {
    std::printf("[FAIL] criterion %d: %s (error: %s)\n", id, what, e.what());
    std::fflush(stdout);
    ++failures;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in.good()) throw std::runtime_error("missing output file " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

using namespace fraclab;

// --- criterion 1: subordination identity --------------------------------

void criterion_1() {
    const char* what = "subordination reproduces the radial power kernel";
    try {
        const double worst =
            std::max(detail::subordination_worst(1, {0.4, 0.5}), detail::subordination_worst(2, {0.4, 1.0}));
        report(1, what, worst <= 1e-8, worst, 1e-8);
    } catch (const std::exception& e) {
        report_error(1, what, e);
    }
}

// --- criterion 2: riesz vs semigroup route ------------------------------

void criterion_2() {
    const char* what = "riesz and semigroup routes agree in relative L2";
    try {
        const double worst =
            std::max(detail::route_equivalence_worst(1, 256), detail::route_equivalence_worst(2, 128));
        report(2, what, worst <= 1e-3, worst, 1e-3);
    } catch (const std::exception& e) {
        report_error(2, what, e);
    }
}

// --- criterion 3: semigroup law and mass conservation -------------------

void criterion_3() {
    const char* what = "two half steps equal one step and kernel mass stays 1";
    try {
        const double law = std::max(detail::semigroup_law_worst(1, 256, 64), detail::semigroup_law_worst(2, 64, 24));
        const double mass = std::max(detail::mass_worst(1, 256, 64), detail::mass_worst(2, 64, 24));
        const double worst = std::max(law, mass);
        report(3, what, worst <= 1e-8, worst, 1e-8);
    } catch (const std::exception& e) {
        report_error(3, what, e);
    }
}

// --- criterion 4: difference-kernel decay constant ----------------------

void criterion_4() {
    const char* what = "difference kernel constant is finite and quadrature-stable";
    try {
        double worst_change = 0.0;
        bool finite = true;
        for (const auto& [dim, alpha] : std::vector<std::pair<int, double>>{{1, 0.5}, {2, 0.5}, {2, 1.0}}) {
            const double c1 = detail::difference_surrogate(dim, alpha, 512);
            const double c2 = detail::difference_surrogate(dim, alpha, 1024);
            finite = finite && std::isfinite(c1) && std::isfinite(c2) && c1 > 0.0;
            worst_change = std::max(worst_change, detail::rel_err(c2, c1));
        }
        report(4, what, finite && worst_change < 0.05, worst_change, 0.05);
    } catch (const std::exception& e) {
        report_error(4, what, e);
    }
}

// --- criterion 5: commutator recurrence vs kernel form ------------------

void criterion_5() {
    const char* what = "commutator recurrence matches the kernel form for m = 1,2,3";
    try {
        const double worst = detail::commutator_routes_worst(64);
        report(5, what, worst <= 1e-10, worst, 1e-10);
    } catch (const std::exception& e) {
        report_error(5, what, e);
    }
}

// --- criterion 6: discrete oscillation chain ----------------------------

double lemma31_acceptance_worst(int dim) {
    RunConfig cfg;
    cfg.dim = dim;
    if (dim == 1) cfg.N = 128;
    const double p1 = 4.0;
    const double beta1 = dim == 2 ? -0.25 : -0.2;
    const double p2 = 2.0;
    const double beta2 = dim == 2 ? -0.75 : -0.45;
    const GridSpec spec = lemma31_spec(cfg, cfg.N);
    const SampledCorpus bs = corpus_sample(corpus_generate(cfg.seed, dim, "symbol"), spec);
    const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, dim, "density"), spec);
    const std::vector<Ball> base = lemma31_base_balls(cfg, spec, 3);
    const Lemma31Report rep = lemma31_check(spec, bs, fs, p1, beta1, p2, beta2, 3, base);
    return std::max({rep.part_max[0], rep.part_max[1], rep.part_max[2]});
}

void criterion_6() {
    const char* what = "oscillation chain bounds hold on corpus and dilates";
    try {
        const double worst = std::max(lemma31_acceptance_worst(1), lemma31_acceptance_worst(2));
        report(6, what, worst <= 1.0 + 1e-9, worst, 1.0 + 1e-9);
    } catch (const std::exception& e) {
        report_error(6, what, e);
    }
}

// --- criterion 7: commutator ratio stability and scale invariance -------

void criterion_7() {
    const char* what = "commutator ratios are finite, refinement-stable, scale-invariant";
    try {
        RunConfig cfg; // dim = 2 defaults
        bool ok = true;
        double worst_drift = 0.0;

        for (int m : {1, 2}) {
            const IndexSet idx = derive_indices(2, 0.5, 4.0, -0.25, 2.0, -0.75, m);
            std::vector<double> vals;
            for (int N : {64, 128}) {
                const ExperimentContext ctx = make_context(cfg, N, idx.alpha);
                const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, 2, "density"), ctx.spec);
                const SampledCorpus bs = corpus_sample(corpus_generate(cfg.seed, 2, "symbol"), ctx.spec);
                const RatioReport rep =
                    commutator_experiment(ctx, fs, bs, idx, CommutatorTarget::campanatoL, "acceptance");
                ok = ok && std::isfinite(rep.max_ratio) && rep.max_ratio > 0.0;
                vals.push_back(rep.max_ratio);
            }
            const DriftReport drift = compute_drift(vals, 0.10);
            ok = ok && drift.pass;
            worst_drift = std::max(worst_drift, drift.max_drift);
        }

        // Dilating the box, the ladder, and the corpus by one octave must
        // reproduce every pair ratio: the index identity gamma = m beta1 +
        // beta2 + alpha makes the comparison exactly scale-free.
        const IndexSet idx = derive_indices(2, 0.5, 4.0, -0.25, 2.0, -0.75, 1);
        const ExperimentContext ctx = make_context(cfg, 64, idx.alpha);
        const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, 2, "density"), ctx.spec);
        const SampledCorpus bs = corpus_sample(corpus_generate(cfg.seed, 2, "symbol"), ctx.spec);
        const RatioReport base = commutator_experiment(ctx, fs, bs, idx, CommutatorTarget::campanatoL, "base");

        RunConfig big = cfg;
        big.L = 2.0;
        big.ladder_r_min = 2.0 * resolved_r_min(cfg);
        const ExperimentContext ctx2 = make_context(big, 64, idx.alpha);
        std::vector<CorpusMember> dens, syms;
        for (const CorpusMember& mem : corpus_generate(cfg.seed, 2, "density")) dens.push_back(dilate_member(mem, 0.5));
        for (const CorpusMember& mem : corpus_generate(cfg.seed, 2, "symbol")) syms.push_back(dilate_member(mem, 0.5));
        const SampledCorpus fs2 = corpus_sample(dens, ctx2.spec);
        const SampledCorpus bs2 = corpus_sample(syms, ctx2.spec);
        const RatioReport scaled = commutator_experiment(ctx2, fs2, bs2, idx, CommutatorTarget::campanatoL, "scaled");

        double scale_dev = 0.0;
        ok = ok && base.rows.size() == scaled.rows.size();
        for (std::size_t i = 0; i < base.rows.size() && i < scaled.rows.size(); ++i) {
            if (base.rows[i].skipped != scaled.rows[i].skipped) ok = false;
            if (base.rows[i].skipped) continue;
            scale_dev = std::max(scale_dev, std::fabs(scaled.rows[i].ratio / base.rows[i].ratio - 1.0));
        }
        ok = ok && scale_dev <= 1e-10;
        report(7, what, ok, std::max(worst_drift, scale_dev), 0.10);
    } catch (const std::exception& e) {
        report_error(7, what, e);
    }
}

// --- criterion 8: adapted vs classical oscillation inclusion ------------

void criterion_8() {
    const char* what = "adapted-to-classical comparison is refinement-stable, zero on constants";
    try {
        RunConfig cfg;
        bool const_ok = true;
        std::vector<double> vals;
        for (int N : {64, 128}) {
            ExperimentContext ctx;
            ctx.spec = spec_for_resolution(cfg, N);
            ctx.K = kernel_by_name(cfg.dim, cfg.kernel);
            ctx.balls = balls_for_spec(cfg, ctx.spec);
            const SampledCorpus fs = corpus_sample(corpus_generate(cfg.seed, 2, "density"), ctx.spec);
            const RatioReport rep = inclusion_experiment(ctx, fs, 2.0, -0.5, "acceptance");
            vals.push_back(rep.max_ratio);
            // A constant is annihilated up to the pinned truncation policy:
            // the kernel reach stops at four standard deviations, so the
            // adapted oscillation floors at the cut Gaussian tail (~e^{-16}
            // at this geometry's reach-to-band slack, diluted by the ball
            // mean to ~1e-10, resolution-stable).  1e-9 sits two orders
            // above that floor and six below the smallest genuine signal.
            for (const RatioRow& row : rep.rows)
                if (row.f_label == "const") const_ok = const_ok && row.skipped && row.lhs <= 1e-9;
        }
        const DriftReport drift = compute_drift(vals, 0.10);
        report(8, what, drift.pass && const_ok && std::isfinite(vals[0]), drift.max_drift, 0.10);
    } catch (const std::exception& e) {
        report_error(8, what, e);
    }
}

// --- criterion 9: estimators vs brute force -----------------------------

void criterion_9() {
    const char* what = "ball estimators match brute force; p=1 oscillation equals bmo";
    try {
        const detail::EstimatorDiff diff = detail::estimator_bruteforce_worst();
        const double worst = std::max(diff.classical, diff.adapted);
        report(9, what, worst <= 1e-12 && diff.bmo_equality == 0.0, std::max(worst, diff.bmo_equality), 1e-12);
    } catch (const std::exception& e) {
        report_error(9, what, e);
    }
}

// --- criterion 10: byte-identical repeat runs ---------------------------

void criterion_10() {
    const char* what = "verify and report outputs are byte-identical across runs";
    try {
        const std::filesystem::path root = std::filesystem::temp_directory_path() / "fraclab-acceptance";
        std::filesystem::remove_all(root);

        RunConfig vcfg;
        bool ok = true;

        std::vector<std::string> verify_files = {"summary.json", "gaussian-bound.json"};
        std::string va, vb;
        for (int pass = 0; pass < 2; ++pass) {
            RunConfig c = vcfg;
            c.out_dir = (root / ("verify-" + std::to_string(pass))).string();
            run_verify(c, nullptr);
            std::string all;
            for (const std::string& f : verify_files) all += slurp(std::filesystem::path(c.out_dir) / f);
            (pass == 0 ? va : vb) = all;
        }
        ok = ok && va == vb && !va.empty();

        // A small but representative report: commutator, lebesgue lift, and
        // inclusion experiments at two resolutions in dimension one.
        RunConfig rcfg;
        rcfg.dim = 1;
        ExperimentConfig comm;
        comm.name = "comm";
        comm.kind = "commutator";
        ExperimentConfig hls;
        hls.name = "lift";
        hls.kind = "hls";
        hls.route = "riesz";
        ExperimentConfig inc;
        inc.name = "incl";
        inc.kind = "inclusion";
        rcfg.experiments = {comm, hls, inc};

        std::vector<std::string> report_files = {"summary.json", "comm-64.csv", "comm-128.csv",
                                                 "lift-64.csv",  "lift-128.csv", "incl-64.csv",
                                                 "incl-128.csv"};
        std::string ra, rb;
        for (int pass = 0; pass < 2; ++pass) {
            RunConfig c = rcfg;
            c.out_dir = (root / ("report-" + std::to_string(pass))).string();
            run_report(c, nullptr);
            std::string all;
            for (const std::string& f : report_files) all += slurp(std::filesystem::path(c.out_dir) / f);
            (pass == 0 ? ra : rb) = all;
        }
        ok = ok && ra == rb && !ra.empty();

        std::filesystem::remove_all(root);
        report(10, what, ok, ok ? 0.0 : 1.0, 0.0);
    } catch (const std::exception& e) {
        report_error(10, what, e);
    }
}

} // namespace

int main() {
    // Keep the determinism criterion honest: no ambient output override.
    unsetenv("FRACLAB_OUT");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures == 0) std::printf("all criteria passed\n");
    return failures;
}
