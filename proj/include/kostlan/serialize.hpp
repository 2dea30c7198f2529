#pragma once

#include <string>

#include <json.hpp>

#include "kostlan/entropy.hpp"
#include "kostlan/multi_index.hpp"
#include "kostlan/study.hpp"

namespace kostlan {

using Json = nlohmann::json;

inline Json to_json(const EnsembleSpec& spec) {
    return Json{{"m", spec.m},
                {"n", spec.n},
                {"measure", std::string(measure_name(spec.measure))},
                {"master_seed", spec.master_seed}};
}

inline EnsembleSpec ensemble_spec_from_json(const Json& j) {
    EnsembleSpec spec;
    spec.m = j.at("m").get<int>();
    spec.n = j.at("n").get<int>();
    spec.measure = measure_from_name(j.at("measure").get<std::string>());
    spec.master_seed = j.at("master_seed").get<std::uint64_t>();
    return spec;
}

inline Json to_json(const SectionCoeffs& s) {
    Json coeffs = Json::array();
    for (const Complex& c : s.coeffs) coeffs.push_back(Json::array({c.real(), c.imag()}));
    return Json{{"spec", to_json(s.spec)},
                {"multi_index_order", std::string(multi_index_order_tag)},
                {"trial_seed", s.trial_seed},
                {"coeffs", std::move(coeffs)}};
}

inline SectionCoeffs section_coeffs_from_json(const Json& j) {
    SectionCoeffs s;
    s.spec = ensemble_spec_from_json(j.at("spec"));
    if (j.at("multi_index_order").get<std::string>() != multi_index_order_tag)
        throw std::domain_error("section coefficients use an unknown multi-index order");
    s.trial_seed = j.at("trial_seed").get<std::uint64_t>();
    for (const Json& c : j.at("coeffs"))
        s.coeffs.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    if (s.coeffs.size() != dimension(s.spec.m, s.spec.n))
        throw std::domain_error("section coefficients have wrong length");
    return s;
}

inline Json to_json(const SolverConfig& cfg) {
    return Json{{"grid_factor", cfg.grid_factor},
                {"refine_iters", cfg.refine_iters},
                {"refine_tol", cfg.refine_tol},
                {"multistart_top_k", cfg.multistart_top_k},
                {"grid_kappa", cfg.grid_kappa}};
}

inline Json to_json(const BoundEnvelope& env) {
    return Json{{"m", env.m},
                {"n", env.n},
                {"dudley", env.dudley_value},
                {"sudakov", env.sudakov_value},
                {"sudakov_arg", env.sudakov_arg},
                {"sharp_lower", env.sharp_lower},
                {"sharp_upper", env.sharp_upper}};
}

// aggregate view only; per-trial records go to CSV
inline Json to_json(const StudyReport& report) {
    Json tails = Json::array();
    for (const auto& [r, p] : report.tail_profile) tails.push_back(Json::array({r, p}));
    Json j{{"spec", to_json(report.spec)},
           {"trials", report.trials},
           {"mean", report.mean},
           {"median", report.median},
           {"std", report.std_dev},
           {"mean_ci", Json::array({report.mean_ci.lo, report.mean_ci.hi})},
           {"median_ci", Json::array({report.median_ci.lo, report.median_ci.hi})},
           {"mean_se", report.mean_se},
           {"median_se", report.median_se},
           {"tail_profile", std::move(tails)}};
    if (report.envelope) {
        j["envelope"] = to_json(*report.envelope);
        const double target = std::sqrt(report.spec.m * std::log(static_cast<double>(report.spec.n)));
        j["ratio_mean_over_sqrt_mlogn"] = report.mean / target;
    } else {
        j["envelope"] = nullptr;
    }
    return j;
}

inline StudyReport study_report_from_json(const Json& j) {
    StudyReport report;
    report.spec = ensemble_spec_from_json(j.at("spec"));
    report.trials = j.at("trials").get<std::size_t>();
    report.mean = j.at("mean").get<double>();
    report.median = j.at("median").get<double>();
    report.std_dev = j.at("std").get<double>();
    report.mean_ci = {j.at("mean_ci").at(0).get<double>(), j.at("mean_ci").at(1).get<double>()};
    report.median_ci = {j.at("median_ci").at(0).get<double>(),
                        j.at("median_ci").at(1).get<double>()};
    report.mean_se = j.at("mean_se").get<double>();
    report.median_se = j.at("median_se").get<double>();
    for (const Json& t : j.at("tail_profile"))
        report.tail_profile.emplace_back(t.at(0).get<double>(), t.at(1).get<double>());
    if (j.contains("envelope") && !j.at("envelope").is_null()) {
        const Json& e = j.at("envelope");
        BoundEnvelope env;
        env.m = e.at("m").get<int>();
        env.n = e.at("n").get<int>();
        env.dudley_value = e.at("dudley").get<double>();
        env.sudakov_value = e.at("sudakov").get<double>();
        env.sudakov_arg = e.at("sudakov_arg").get<double>();
        env.sharp_lower = e.at("sharp_lower").get<double>();
        env.sharp_upper = e.at("sharp_upper").get<double>();
        report.envelope = env;
    }
    return report;
}

}  // namespace kostlan
