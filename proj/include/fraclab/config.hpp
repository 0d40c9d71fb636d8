#pragma once

#include <cctype>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fraclab/common.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

// One experiment block from the config.  NaN means "take the built-in
// default for this kind and dimension".
struct ExperimentConfig {
    std::string name;
    std::string kind; // commutator | hls | morrey | inclusion | lemma31
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double p1 = std::numeric_limits<double>::quiet_NaN();
    double beta1 = std::numeric_limits<double>::quiet_NaN();
    double p2 = std::numeric_limits<double>::quiet_NaN();
    double beta2 = std::numeric_limits<double>::quiet_NaN();
    int m = 1;
    std::string target = "campanatoL";
    std::string route = "semigroup";
    double p = std::numeric_limits<double>::quiet_NaN();
    double gamma = std::numeric_limits<double>::quiet_NaN();
    int k_max = 3;
    std::vector<int> resolutions; // empty -> {N, 2N}
    double budget = 0.10;
};

// Parameters for the single-shot subcommands (evolve, fracint, commutator,
// norm, kernel-profile).
struct OpConfig {
    std::string f = "bump";
    std::string b = "linear";
    // Resolved (t >= 4 h^2) and admissible at the default grid and kernel.
    double t = 5e-3;
    double alpha = 0.5;
    int m = 1;
    std::string norm = "bmo";
    double p = 2.0;
    double exponent = 0.0;
    double rho = 1.0;
    std::string route = "semigroup";
};

struct RunConfig {
    // [grid]
    int dim = 2;
    int N = 64;
    double L = 1.0;
    int margin = 24;
    // [ladder]; r_min absent means "auto" (two grid spacings at the base N)
    std::optional<double> ladder_r_min;
    double ladder_ratio = 1.45;
    int ladder_count = 3;
    int ladder_stride = 0; // 0 means auto: N/32
    // [quad]; absent means auto-derived windows
    std::optional<QuadratureSpec> quad;
    int quad_steps = 512;
    // [kernel]. heat-a0.5 is the default because the default ladder and
    // margin are sized for its reach; see the README table.
    std::string kernel = "heat-a0.5";
    // [run]
    std::uint64_t seed = 20260817;
    std::string out_dir = "out";
    // [op]
    OpConfig op;
    // [experiment <name>] blocks
    std::vector<ExperimentConfig> experiments;
};

namespace detail {

inline std::string config_trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] inline void config_fail(int line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

inline double parse_number(int line, const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        config_fail(line, "expected a number for key \"" + key + "\", got \"" + value + "\"");
    }
}

inline std::int64_t parse_integer(int line, const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        config_fail(line, "expected an integer for key \"" + key + "\", got \"" + value + "\"");
    }
}

} // namespace detail

// Flat INI-style grammar: [section] headers, key = value lines, # comments.
// The first offending line wins the diagnostic.
inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    ExperimentConfig* exp = nullptr;
    // Partial [quad] windows are collected here and validated at the end.
    std::optional<double> quad_lo, quad_hi;
    int quad_line = 0;

    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const std::size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = detail::config_trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') detail::config_fail(line, "unterminated section header");
            const std::string inner = detail::config_trim(s.substr(1, s.size() - 2));
            if (inner == "grid" || inner == "ladder" || inner == "quad" || inner == "kernel" || inner == "run" ||
                inner == "op") {
                section = inner;
                exp = nullptr;
            } else if (inner.rfind("experiment", 0) == 0) {
                const std::string name = detail::config_trim(inner.substr(10));
                if (name.empty()) detail::config_fail(line, "experiment section needs a name: [experiment <name>]");
                for (const ExperimentConfig& e : cfg.experiments)
                    if (e.name == name) detail::config_fail(line, "duplicate experiment name \"" + name + "\"");
                cfg.experiments.emplace_back();
                cfg.experiments.back().name = name;
                exp = &cfg.experiments.back();
                section = "experiment";
            } else {
                detail::config_fail(line, "unknown section [" + inner + "]");
            }
            continue;
        }

        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) detail::config_fail(line, "expected key = value");
        const std::string key = detail::config_trim(s.substr(0, eq));
        const std::string value = detail::config_trim(s.substr(eq + 1));
        if (key.empty()) detail::config_fail(line, "empty key");
        if (value.empty()) detail::config_fail(line, "empty value for key \"" + key + "\"");
        if (section.empty()) detail::config_fail(line, "key \"" + key + "\" appears before any [section]");

        if (section == "grid") {
            if (key == "dim") {
                const auto v = detail::parse_integer(line, key, value);
                if (v != 1 && v != 2) detail::config_fail(line, "dim must be 1 or 2");
                cfg.dim = static_cast<int>(v);
            } else if (key == "N") {
                const auto v = detail::parse_integer(line, key, value);
                if (v < 16 || !is_power_of_two(static_cast<std::uint64_t>(v)))
                    detail::config_fail(line, "N must be a power of two and at least 16");
                cfg.N = static_cast<int>(v);
            } else if (key == "L") {
                const double v = detail::parse_number(line, key, value);
                if (!(v > 0.0) || !std::isfinite(v)) detail::config_fail(line, "L must be positive and finite");
                cfg.L = v;
            } else if (key == "margin") {
                const auto v = detail::parse_integer(line, key, value);
                if (v < 0) detail::config_fail(line, "margin must be >= 0");
                cfg.margin = static_cast<int>(v);
            } else {
                detail::config_fail(line, "unknown key \"" + key + "\" in [grid]");
            }
        } else if (section == "ladder") {
            if (key == "r_min") {
                if (value == "auto") {
                    cfg.ladder_r_min.reset();
                } else {
                    const double v = detail::parse_number(line, key, value);
                    if (!(v > 0.0)) detail::config_fail(line, "r_min must be positive (or \"auto\")");
                    cfg.ladder_r_min = v;
                }
            } else if (key == "ratio") {
                const double v = detail::parse_number(line, key, value);
                if (!(v > 1.0)) detail::config_fail(line, "ratio must be > 1");
                cfg.ladder_ratio = v;
            } else if (key == "count") {
                const auto v = detail::parse_integer(line, key, value);
                if (v < 3) detail::config_fail(line, "count must be >= 3");
                cfg.ladder_count = static_cast<int>(v);
            } else if (key == "stride") {
                const auto v = detail::parse_integer(line, key, value);
                if (v < 1) detail::config_fail(line, "stride must be >= 1");
                cfg.ladder_stride = static_cast<int>(v);
            } else {
                detail::config_fail(line, "unknown key \"" + key + "\" in [ladder]");
            }
        } else if (section == "quad") {
            if (key == "s_min") {
                quad_lo = detail::parse_number(line, key, value);
                quad_line = line;
            } else if (key == "s_max") {
                quad_hi = detail::parse_number(line, key, value);
                quad_line = line;
            } else if (key == "steps") {
                const auto v = detail::parse_integer(line, key, value);
                if (v < 64) detail::config_fail(line, "steps must be >= 64");
                cfg.quad_steps = static_cast<int>(v);
            } else {
                detail::config_fail(line, "unknown key \"" + key + "\" in [quad]");
            }
        } else if (section == "kernel") {
            if (key == "name") {
                cfg.kernel = value;
            } else {
                detail::config_fail(line, "unknown key \"" + key + "\" in [kernel]");
            }
        } else if (section == "run") {
            if (key == "seed") {
                cfg.seed = static_cast<std::uint64_t>(detail::parse_integer(line, key, value));
            } else if (key == "out") {
                cfg.out_dir = value;
            } else {
                detail::config_fail(line, "unknown key \"" + key + "\" in [run]");
            }
        } else if (section == "op") {
            if (key == "f") cfg.op.f = value;
            else if (key == "b") cfg.op.b = value;
            else if (key == "t") cfg.op.t = detail::parse_number(line, key, value);
            else if (key == "alpha") cfg.op.alpha = detail::parse_number(line, key, value);
            else if (key == "m") cfg.op.m = static_cast<int>(detail::parse_integer(line, key, value));
            else if (key == "norm") cfg.op.norm = value;
            else if (key == "p") cfg.op.p = detail::parse_number(line, key, value);
            else if (key == "exponent") cfg.op.exponent = detail::parse_number(line, key, value);
            else if (key == "rho") cfg.op.rho = detail::parse_number(line, key, value);
            else if (key == "route") cfg.op.route = value;
            else detail::config_fail(line, "unknown key \"" + key + "\" in [op]");
        } else { // experiment
            if (key == "kind") {
                if (value != "commutator" && value != "hls" && value != "morrey" && value != "inclusion" &&
                    value != "lemma31")
                    detail::config_fail(line, "unknown experiment kind \"" + value + "\"");
                exp->kind = value;
            } else if (key == "alpha") exp->alpha = detail::parse_number(line, key, value);
            else if (key == "p1") exp->p1 = detail::parse_number(line, key, value);
            else if (key == "beta1") exp->beta1 = detail::parse_number(line, key, value);
            else if (key == "p2") exp->p2 = detail::parse_number(line, key, value);
            else if (key == "beta2") exp->beta2 = detail::parse_number(line, key, value);
            else if (key == "m") exp->m = static_cast<int>(detail::parse_integer(line, key, value));
            else if (key == "target") {
                if (value != "campanatoL" && value != "morrey")
                    detail::config_fail(line, "target must be campanatoL or morrey");
                exp->target = value;
            } else if (key == "route") {
                if (value != "riesz" && value != "semigroup")
                    detail::config_fail(line, "route must be riesz or semigroup");
                exp->route = value;
            } else if (key == "p") exp->p = detail::parse_number(line, key, value);
            else if (key == "gamma") exp->gamma = detail::parse_number(line, key, value);
            else if (key == "k_max") {
                const auto v = detail::parse_integer(line, key, value);
                if (v < 1) detail::config_fail(line, "k_max must be >= 1");
                exp->k_max = static_cast<int>(v);
            } else if (key == "resolutions") {
                std::string item;
                std::istringstream parts(value);
                exp->resolutions.clear();
                while (std::getline(parts, item, ',')) {
                    item = detail::config_trim(item);
                    if (item.empty()) continue;
                    const auto v = detail::parse_integer(line, key, item);
                    if (v < 16 || !is_power_of_two(static_cast<std::uint64_t>(v)))
                        detail::config_fail(line, "each resolution must be a power of two and at least 16");
                    exp->resolutions.push_back(static_cast<int>(v));
                }
                if (exp->resolutions.size() < 2)
                    detail::config_fail(line, "resolutions needs at least two comma-separated values");
            } else if (key == "budget") {
                const double v = detail::parse_number(line, key, value);
                if (!(v > 0.0)) detail::config_fail(line, "budget must be positive");
                exp->budget = v;
            } else {
                detail::config_fail(line, "unknown key \"" + key + "\" in [experiment " + exp->name + "]");
            }
        }
    }

    if (quad_lo.has_value() != quad_hi.has_value())
        detail::config_fail(quad_line, "s_min and s_max must be given together");
    if (quad_lo.has_value()) {
        try {
            cfg.quad = QuadratureSpec(*quad_lo, *quad_hi, cfg.quad_steps);
        } catch (const std::exception& e) {
            detail::config_fail(quad_line, e.what());
        }
    }
    if (2 * cfg.margin >= cfg.N)
        throw std::invalid_argument("config: margin must satisfy 2*margin < N (got margin " +
                                    std::to_string(cfg.margin) + ", N " + std::to_string(cfg.N) + ")");
    for (const ExperimentConfig& e : cfg.experiments)
        if (e.kind.empty())
            throw std::invalid_argument("config: experiment \"" + e.name + "\" is missing its kind");
    return cfg;
}

} // namespace fraclab
