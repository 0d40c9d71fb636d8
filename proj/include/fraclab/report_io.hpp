#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fraclab/harness.hpp"
#include "fraclab/norms.hpp"
#include "fraclab/semigroup.hpp"

namespace fraclab {

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), "cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    require(out.good(), "failed writing " + path.string());
}

namespace detail {

// CSV cell for a possibly not-applicable number: NaN prints as empty.
inline std::string csv_num(double v) { return std::isnan(v) ? std::string() : format_double(v); }

} // namespace detail

inline std::string ratio_report_csv(const RatioReport& rep) {
    std::string out = "experiment,alpha,p1,beta1,p2,beta2,m,q,gamma,f_label,b_label,lhs,rhs,ratio\n";
    const std::string prefix = rep.experiment + "," + detail::csv_num(rep.alpha) + "," + detail::csv_num(rep.p1) +
                               "," + detail::csv_num(rep.beta1) + "," + detail::csv_num(rep.p2) + "," +
                               detail::csv_num(rep.beta2) + "," + (rep.m > 0 ? std::to_string(rep.m) : "") + "," +
                               detail::csv_num(rep.q) + "," + detail::csv_num(rep.gamma) + ",";
    for (const RatioRow& row : rep.rows) {
        out += prefix + row.f_label + "," + row.b_label + "," + format_double(row.lhs) + "," +
               format_double(row.rhs) + "," + detail::csv_num(row.ratio) + "\n";
    }
    return out;
}

inline nlohmann::ordered_json norm_estimate_json(const NormEstimate& est) {
    nlohmann::ordered_json j;
    j["norm"] = est.norm;
    j["p"] = est.p;
    j["exponent"] = est.exponent;
    j["value"] = est.value;
    j["argmax_center"] = est.argmax_center;
    j["argmax_radius"] = est.argmax_radius;
    j["N"] = est.resolution;
    j["ladder"] = est.family;
    return j;
}

inline nlohmann::ordered_json gaussian_bound_json(const GaussianBoundReport& rep) {
    nlohmann::ordered_json j;
    j["name"] = rep.name;
    j["worst_t"] = rep.worst_t;
    j["worst_r"] = rep.worst_r;
    j["ratio"] = rep.max_ratio;
    j["pass"] = rep.pass;
    return j;
}

struct CheckResult {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double budget = 0.0;
};

inline nlohmann::ordered_json summary_json(const std::string& suite, const std::vector<CheckResult>& checks) {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["checks"] = nlohmann::ordered_json::array();
    for (const CheckResult& c : checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["pass"] = c.pass;
        e["observed"] = c.observed;
        e["budget"] = c.budget;
        j["checks"].push_back(e);
    }
    return j;
}

inline std::string lemma31_csv(const Lemma31Report& rep) {
    std::string out = "part,k,b_label,f_label,lhs,rhs,ratio\n";
    for (const Lemma31Row& row : rep.rows) {
        out += std::to_string(row.part) + "," + std::to_string(row.k) + "," + row.b_label + "," + row.f_label +
               "," + format_double(row.lhs) + "," + format_double(row.rhs) + "," + detail::csv_num(row.ratio) + "\n";
    }
    return out;
}

} // namespace fraclab
