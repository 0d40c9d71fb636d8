// Command line front end.  Every subcommand reads the same INI config (all
// keys optional), applies any flag overrides, and hands a RunConfig to the
// corresponding runner.  Exit codes: 0 success / all checks passed, 1 a check
// failed its budget, 2 usage or configuration or numerical-validity errors.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <fraclab/runner.hpp>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw std::invalid_argument("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for fractional integrals of Gaussian-bounded semigroups"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    app.add_option("-c,--config", config_path, "INI config file")->check(CLI::ExistingFile);
    app.add_option("--out", out_override, "output directory (overrides config and FRACLAB_OUT)");

    // Flag overrides for the single-shot subcommands; only values the user
    // actually passed replace config values.
    std::optional<std::string> opt_f, opt_b, opt_norm, opt_route, opt_kernel;
    std::optional<double> opt_t, opt_alpha, opt_p, opt_exponent, opt_rho;
    std::optional<int> opt_m, opt_N;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--N", opt_N, "points per axis (power of two, >= 16)");
        sub->add_option("--kernel", opt_kernel, "kernel family name");
    };

    CLI::App* evolve = app.add_subcommand("evolve", "apply the semigroup at time t to a corpus member");
    add_common(evolve);
    evolve->add_option("--f", opt_f, "density corpus member label");
    evolve->add_option("--t", opt_t, "evolution time");

    CLI::App* fracint = app.add_subcommand("fracint", "apply the fractional integral to a corpus member");
    add_common(fracint);
    fracint->add_option("--f", opt_f, "density corpus member label");
    fracint->add_option("--alpha", opt_alpha, "order of the fractional integral");
    fracint->add_option("--route", opt_route, "riesz or semigroup");

    CLI::App* comm = app.add_subcommand("commutator", "apply the iterated commutator to a corpus pair");
    add_common(comm);
    comm->add_option("--f", opt_f, "density corpus member label");
    comm->add_option("--b", opt_b, "symbol corpus member label");
    comm->add_option("--alpha", opt_alpha, "order of the fractional integral");
    comm->add_option("--m", opt_m, "commutator order (>= 1)");
    comm->add_option("--route", opt_route, "riesz or semigroup");

    CLI::App* norm = app.add_subcommand("norm", "estimate a function-space norm of a corpus member");
    add_common(norm);
    norm->add_option("--f", opt_f, "density corpus member label");
    norm->add_option("--b", opt_b, "symbol corpus member label (for --norm rh)");
    norm->add_option("--norm", opt_norm,
                     "lp, sup, lip, type, bmo, morrey, campanato, campanatoL, bmoL, rh, sharp");
    norm->add_option("--p", opt_p, "integrability exponent");
    norm->add_option("--exponent", opt_exponent, "growth/oscillation exponent (beta or gamma)");
    norm->add_option("--rho", opt_rho, "weight decay exponent for --norm type");

    CLI::App* profile = app.add_subcommand("kernel-profile", "tabulate the subordination kernel against r^{alpha-dim}");
    add_common(profile);
    profile->add_option("--alpha", opt_alpha, "order of the fractional integral");

    app.add_subcommand("verify", "run the fast pinned invariant suite");
    app.add_subcommand("report", "run the configured ratio experiments across resolutions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        fraclab::RunConfig cfg;
        if (!config_path.empty()) cfg = fraclab::parse_config(slurp(config_path));
        if (!out_override.empty()) {
            cfg.out_dir = out_override;
            setenv("FRACLAB_OUT", out_override.c_str(), 1);
        }
        if (opt_N) {
            if (*opt_N < 16 || !fraclab::is_power_of_two(static_cast<std::uint64_t>(*opt_N)))
                throw std::invalid_argument("--N must be a power of two and at least 16");
            // Rescale the margin with N so the physical band is unchanged.
            cfg.margin = static_cast<int>(std::llround(cfg.margin * static_cast<double>(*opt_N) / cfg.N));
            cfg.N = *opt_N;
        }
        if (opt_kernel) cfg.kernel = *opt_kernel;
        if (opt_f) cfg.op.f = *opt_f;
        if (opt_b) cfg.op.b = *opt_b;
        if (opt_t) cfg.op.t = *opt_t;
        if (opt_alpha) cfg.op.alpha = *opt_alpha;
        if (opt_m) cfg.op.m = *opt_m;
        if (opt_norm) cfg.op.norm = *opt_norm;
        if (opt_p) cfg.op.p = *opt_p;
        if (opt_exponent) cfg.op.exponent = *opt_exponent;
        if (opt_rho) cfg.op.rho = *opt_rho;
        if (opt_route) {
            if (*opt_route != "riesz" && *opt_route != "semigroup")
                throw std::invalid_argument("--route must be riesz or semigroup");
            cfg.op.route = *opt_route;
        }

        if (evolve->parsed()) return fraclab::run_evolve(cfg);
        if (fracint->parsed()) return fraclab::run_fracint(cfg);
        if (comm->parsed()) return fraclab::run_commutator_cmd(cfg);
        if (norm->parsed()) return fraclab::run_norm(cfg);
        if (profile->parsed()) return fraclab::run_kernel_profile(cfg);
        if (app.got_subcommand("verify")) return fraclab::run_verify(cfg);
        if (app.got_subcommand("report")) return fraclab::run_report(cfg);
        throw std::invalid_argument("no subcommand given");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
