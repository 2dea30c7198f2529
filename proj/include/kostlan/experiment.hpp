#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "kostlan/errors.hpp"
#include "kostlan/io.hpp"
#include "kostlan/serialize.hpp"
#include "kostlan/study.hpp"
#include "kostlan/version.hpp"

namespace kostlan {

enum class Command {
    study,
    metric_table,
    covering,
    dudley,
    sudakov,
    kernel_sweep,
    concentration,
    report
};

inline const std::map<std::string, Command>& command_names() {
    static const std::map<std::string, Command> names = {
        {"study", Command::study},
        {"metric-table", Command::metric_table},
        {"covering", Command::covering},
        {"dudley", Command::dudley},
        {"sudakov", Command::sudakov},
        {"kernel-sweep", Command::kernel_sweep},
        {"concentration", Command::concentration},
        {"report", Command::report}};
    return names;
}

inline std::string command_name(Command c) {
    for (const auto& [name, cmd] : command_names())
        if (cmd == c) return name;
    return "?";
}

struct ExperimentConfig {
    Command command = Command::study;
    EnsembleSpec spec;
    SolverConfig solver;
    std::string output_dir;
    Json overrides = Json::object();  // defaults merged in during parsing

    // experiment identity: everything that determines artifact content.
    // output_dir is delivery location only and stays out of the digest.
    Json identity() const {
        return Json{{"command", command_name(command)},
                    {"spec", to_json(spec)},
                    {"solver", to_json(solver)},
                    {"overrides", overrides}};
    }

    std::string digest() const { return io::hex64(io::fnv1a64(identity().dump())); }
};

namespace detail {

inline void require_keys(const Json& j, const std::vector<std::string>& allowed,
                         const std::string& context) {
    if (!j.is_object()) throw ConfigError("config: '" + context + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("config: unknown key '" + key + "' in " + context);
    }
}

inline double as_number(const Json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError("config: '" + key + "' must be a number");
    return j.get<double>();
}

inline std::int64_t as_integer(const Json& j, const std::string& key) {
    if (!j.is_number_integer()) throw ConfigError("config: '" + key + "' must be an integer");
    return j.get<std::int64_t>();
}

inline std::string as_string(const Json& j, const std::string& key) {
    if (!j.is_string()) throw ConfigError("config: '" + key + "' must be a string");
    return j.get<std::string>();
}

// n_list accepts an integer or a comma-separated string of integers
inline std::vector<int> parse_n_list(const Json& j) {
    std::vector<int> out;
    if (j.is_number_integer()) {
        out.push_back(static_cast<int>(j.get<std::int64_t>()));
        return out;
    }
    if (!j.is_string()) throw ConfigError("config: 'n_list' must be an integer or string");
    const std::string s = j.get<std::string>();
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        const std::string tok = s.substr(pos, next - pos);
        try {
            out.push_back(std::stoi(tok));
        } catch (...) {
            throw ConfigError("config: bad entry '" + tok + "' in 'n_list'");
        }
        pos = next + 1;
    }
    if (out.empty()) throw ConfigError("config: 'n_list' is empty");
    return out;
}

}  // namespace detail

inline EnsembleSpec parse_spec(const Json& j) {
    detail::require_keys(j, {"m", "n", "measure", "master_seed"}, "spec");
    EnsembleSpec spec;
    if (j.contains("m")) spec.m = static_cast<int>(detail::as_integer(j.at("m"), "m"));
    if (j.contains("n")) spec.n = static_cast<int>(detail::as_integer(j.at("n"), "n"));
    if (j.contains("measure")) {
        try {
            spec.measure = measure_from_name(detail::as_string(j.at("measure"), "measure"));
        } catch (const std::domain_error& e) {
            throw ConfigError(std::string("config: 'measure': ") + e.what());
        }
    }
    if (j.contains("master_seed")) {
        const Json& ms = j.at("master_seed");
        if (!ms.is_number_integer() && !ms.is_number_unsigned())
            throw ConfigError("config: 'master_seed' must be an integer");
        spec.master_seed = ms.get<std::uint64_t>();
    }
    if (spec.m < 1) throw ConfigError("config: 'm' must be >= 1");
    if (spec.n < 0) throw ConfigError("config: 'n' must be >= 0");
    return spec;
}

inline SolverConfig parse_solver(const Json& j) {
    detail::require_keys(
        j, {"grid_factor", "refine_iters", "refine_tol", "multistart_top_k", "grid_kappa"},
        "solver");
    SolverConfig cfg;
    if (j.contains("grid_factor"))
        cfg.grid_factor = detail::as_number(j.at("grid_factor"), "grid_factor");
    if (j.contains("refine_iters"))
        cfg.refine_iters = static_cast<int>(detail::as_integer(j.at("refine_iters"), "refine_iters"));
    if (j.contains("refine_tol"))
        cfg.refine_tol = detail::as_number(j.at("refine_tol"), "refine_tol");
    if (j.contains("multistart_top_k"))
        cfg.multistart_top_k =
            static_cast<int>(detail::as_integer(j.at("multistart_top_k"), "multistart_top_k"));
    if (j.contains("grid_kappa"))
        cfg.grid_kappa = detail::as_number(j.at("grid_kappa"), "grid_kappa");
    if (!(cfg.grid_factor >= 2.0)) throw ConfigError("config: 'grid_factor' must be >= 2");
    if (!(cfg.refine_tol > 0.0)) throw ConfigError("config: 'refine_tol' must be positive");
    if (cfg.refine_iters < 1) throw ConfigError("config: 'refine_iters' must be >= 1");
    if (cfg.multistart_top_k < 1) throw ConfigError("config: 'multistart_top_k' must be >= 1");
    if (!(cfg.grid_kappa > 0.0)) throw ConfigError("config: 'grid_kappa' must be positive");
    return cfg;
}

namespace detail {

struct OverrideSpec {
    std::vector<std::string> allowed;
    Json defaults;
};

inline OverrideSpec override_spec_for(Command cmd, const EnsembleSpec& spec) {
    switch (cmd) {
        case Command::study:
            return {{"trials"}, Json{{"trials", spec.m == 1 ? 400 : 200}}};
        case Command::metric_table:
            return {{"points", "r_max"},
                    Json{{"points", 200}, {"r_max", std::numbers::pi / 2.0}}};
        case Command::covering:
            return {{"method", "epsilon_min", "epsilon_max", "epsilon_count", "probe_count"},
                    Json{{"method", "formula"},
                         {"epsilon_min", 0.05},
                         {"epsilon_max", 1.5},
                         {"epsilon_count", 24},
                         {"probe_count", 100000}}};
        case Command::dudley:
            return {{"n_list", "quad_points"},
                    Json{{"n_list", "64,256,1024,4096"}, {"quad_points", 256}}};
        case Command::sudakov:
            return {{"n_list", "grid_size", "quad_points"},
                    Json{{"n_list", "64,256,1024,4096"}, {"grid_size", 256}, {"quad_points", 256}}};
        case Command::kernel_sweep:
            return {{"regime", "eps", "lambda", "points"},
                    Json{{"regime", "agmon"}, {"eps", 0.1}, {"lambda", 0.5}, {"points", 200}}};
        case Command::concentration:
            return {{"study"}, Json::object()};
        case Command::report:
            return {{}, Json::object()};
    }
    return {{}, Json::object()};
}

}  // namespace detail

// Strict parse: unknown keys anywhere are rejected, defaults are merged so the
// emitted artifact records the full effective configuration.
inline ExperimentConfig parse_config(const Json& doc) {
    detail::require_keys(doc, {"command", "spec", "solver", "output_dir", "overrides"},
                         "top level");
    if (!doc.contains("command")) throw ConfigError("config: missing required key 'command'");
    const std::string cmd_name = detail::as_string(doc.at("command"), "command");
    const auto it = command_names().find(cmd_name);
    if (it == command_names().end())
        throw ConfigError("config: unknown value '" + cmd_name + "' for 'command'");

    ExperimentConfig cfg;
    cfg.command = it->second;
    if (doc.contains("spec")) cfg.spec = parse_spec(doc.at("spec"));
    if (doc.contains("solver")) cfg.solver = parse_solver(doc.at("solver"));
    if (doc.contains("output_dir"))
        cfg.output_dir = detail::as_string(doc.at("output_dir"), "output_dir");

    const detail::OverrideSpec ospec = detail::override_spec_for(cfg.command, cfg.spec);
    Json merged = ospec.defaults;
    if (doc.contains("overrides")) {
        detail::require_keys(doc.at("overrides"), ospec.allowed, "overrides");
        for (const auto& [key, value] : doc.at("overrides").items()) {
            if (!value.is_primitive())
                throw ConfigError("config: override '" + key + "' must be a scalar");
            merged[key] = value;
        }
    }
    cfg.overrides = std::move(merged);
    return cfg;
}

inline ExperimentConfig parse_config(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

struct Manifest {
    std::string config_digest;
    Json config;
    std::vector<std::pair<std::string, std::string>> files;  // (name, content digest)
    std::vector<std::string> volatile_files;                 // timing etc., not digested

    Json to_json() const {
        Json jfiles = Json::array();
        for (const auto& [name, digest] : files)
            jfiles.push_back(Json{{"name", name}, {"fnv1a64", digest}});
        return Json{{"version", version},
                    {"config", config},
                    {"config_digest", config_digest},
                    {"files", jfiles},
                    {"volatile_files", volatile_files}};
    }
};

namespace detail {

inline void csv_preamble(io::CsvBuilder& csv, const ExperimentConfig& cfg) {
    csv.comment(std::string("kostlan ") + version);
    csv.comment("config_digest " + cfg.digest());
}

inline std::string study_basename(const EnsembleSpec& spec) {
    return "study_m" + std::to_string(spec.m) + "_n" + std::to_string(spec.n) + "_" +
           std::string(measure_name(spec.measure));
}

struct ArtifactSet {
    std::vector<std::pair<std::string, std::string>> durable;   // name -> content
    std::vector<std::pair<std::string, std::string>> volatile_; // name -> content
};

inline ArtifactSet make_study_artifacts(const ExperimentConfig& cfg, int threads) {
    const std::size_t trials =
        static_cast<std::size_t>(as_integer(cfg.overrides.at("trials"), "trials"));
    const StudyReport report = run_study(cfg.spec, trials, cfg.solver, threads);
    const std::string base = study_basename(cfg.spec);
    ArtifactSet out;

    Json study = to_json(report);
    study["version"] = version;
    study["config_digest"] = cfg.digest();
    study["solver"] = to_json(cfg.solver);
    out.durable.emplace_back(base + ".json", study.dump(2) + "\n");

    io::CsvBuilder trials_csv;
    csv_preamble(trials_csv, cfg);
    std::vector<std::string> cols = {"trial_index", "trial_seed", "sup_value"};
    for (int j = 0; j <= cfg.spec.m; ++j) {
        cols.push_back("argmax_re" + std::to_string(j));
        cols.push_back("argmax_im" + std::to_string(j));
    }
    cols.push_back("solver_gap");
    trials_csv.header(cols);
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        const TrialRecord& rec = report.records[i];
        trials_csv.cell(static_cast<std::uint64_t>(i));
        trials_csv.cell(rec.trial_seed);
        trials_csv.cell(rec.sup_value);
        for (const Complex& c : rec.argmax_lift) {
            trials_csv.cell(c.real());
            trials_csv.cell(c.imag());
        }
        trials_csv.cell(rec.solver_gap);
        trials_csv.end_row();
    }
    out.durable.emplace_back(base + "_trials.csv", trials_csv.str());

    io::CsvBuilder tails_csv;
    csv_preamble(tails_csv, cfg);
    tails_csv.header({"r", "empirical", "levy_bound"});
    for (const auto& [r, p] : report.tail_profile) {
        tails_csv.cell(r);
        tails_csv.cell(p);
        tails_csv.cell(levy_tail(r));
        tails_csv.end_row();
    }
    out.durable.emplace_back(base + "_tails.csv", tails_csv.str());

    // wall-clock per trial is not reproducible across runs, so it is exported
    // outside the digested artifact set
    io::CsvBuilder timings_csv;
    csv_preamble(timings_csv, cfg);
    timings_csv.header({"trial_index", "wall_time"});
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        timings_csv.cell(static_cast<std::uint64_t>(i));
        timings_csv.cell(report.records[i].wall_time);
        timings_csv.end_row();
    }
    out.volatile_.emplace_back(base + "_timings.csv", timings_csv.str());
    return out;
}

inline ArtifactSet make_metric_table(const ExperimentConfig& cfg) {
    const int points = static_cast<int>(as_integer(cfg.overrides.at("points"), "points"));
    const double r_max = as_number(cfg.overrides.at("r_max"), "r_max");
    if (points < 2) throw ConfigError("config: 'points' must be >= 2");
    const int m = cfg.spec.m, n = cfg.spec.n;
    io::CsvBuilder csv;
    csv_preamble(csv, cfg);
    csv.header({"r", "dn_metric", "small_scale_model", "linearized", "model_abs_error"});
    for (int i = 0; i < points; ++i) {
        const double r = r_max * i / (points - 1);
        std::vector<Complex> x(static_cast<std::size_t>(m) + 1, 0.0), y = x;
        x[0] = 1.0;
        y[0] = std::cos(r);
        y[1] = std::sin(r);
        const ProjectivePoint p = ProjectivePoint::from_lift(std::move(x));
        const ProjectivePoint q = ProjectivePoint::from_lift(std::move(y));
        const double dn = dn_metric(m, n, p, q).value;
        const double model = small_scale_model(n, r);
        csv.cell(r);
        csv.cell(dn);
        csv.cell(model);
        csv.cell(linearized_small_scale(n, r));
        csv.cell(std::abs(dn - model));
        csv.end_row();
    }
    ArtifactSet out;
    out.durable.emplace_back(
        "metric_table_m" + std::to_string(m) + "_n" + std::to_string(n) + ".csv", csv.str());
    return out;
}

inline ArtifactSet make_covering(const ExperimentConfig& cfg) {
    const std::string method_name = as_string(cfg.overrides.at("method"), "method");
    CoveringMethod method;
    if (method_name == "formula") {
        method = CoveringMethod::formula;
    } else if (method_name == "greedy") {
        method = CoveringMethod::greedy;
    } else {
        throw ConfigError("config: 'method' must be 'formula' or 'greedy'");
    }
    const double eps_min = as_number(cfg.overrides.at("epsilon_min"), "epsilon_min");
    const double eps_max = as_number(cfg.overrides.at("epsilon_max"), "epsilon_max");
    const int count = static_cast<int>(as_integer(cfg.overrides.at("epsilon_count"), "epsilon_count"));
    if (!(eps_min > 0.0) || !(eps_max > eps_min))
        throw ConfigError("config: need 0 < epsilon_min < epsilon_max");
    if (count < 2) throw ConfigError("config: 'epsilon_count' must be >= 2");
    CoveringConfig ccfg;
    ccfg.probe_count =
        static_cast<std::size_t>(as_integer(cfg.overrides.at("probe_count"), "probe_count"));

    const int m = cfg.spec.m, n = cfg.spec.n;
    std::vector<double> eps_grid;
    for (int i = 0; i < count; ++i)
        eps_grid.push_back(eps_min + (eps_max - eps_min) * i / (count - 1));
    // the threshold radius is the distinguished instance; always include it
    eps_grid.push_back(std::numbers::sqrt2 * std::sqrt(1.0 - 1.0 / static_cast<double>(n)));
    std::sort(eps_grid.begin(), eps_grid.end());

    io::CsvBuilder csv;
    csv_preamble(csv, cfg);
    csv.header({"epsilon", "count_low", "count_high", "method"});
    for (double eps : eps_grid) {
        const CoveringReport rep = covering_number(m, n, eps, method, ccfg);
        csv.cell(eps);
        csv.cell(rep.count_low);
        csv.cell(rep.count_high);
        csv.cell(method_name);
        csv.end_row();
    }
    ArtifactSet out;
    out.durable.emplace_back(
        "covering_m" + std::to_string(m) + "_n" + std::to_string(n) + ".csv", csv.str());
    return out;
}

inline ArtifactSet make_dudley(const ExperimentConfig& cfg) {
    const std::vector<int> ns = parse_n_list(cfg.overrides.at("n_list"));
    const int quad = static_cast<int>(as_integer(cfg.overrides.at("quad_points"), "quad_points"));
    const int m = cfg.spec.m;
    io::CsvBuilder csv;
    csv_preamble(csv, cfg);
    csv.header({"n", "m", "dudley", "head", "tail", "dudley_over_sqrt_log_n"});
    for (int n : ns) {
        const DudleyResult res = dudley_integral(m, n, quad);
        csv.cell(static_cast<std::uint64_t>(n));
        csv.cell(static_cast<std::uint64_t>(m));
        csv.cell(res.total);
        csv.cell(res.head);
        csv.cell(res.tail);
        csv.cell(res.total / std::sqrt(std::log(static_cast<double>(n))));
        csv.end_row();
    }
    ArtifactSet out;
    out.durable.emplace_back("dudley_m" + std::to_string(m) + ".csv", csv.str());
    return out;
}

inline ArtifactSet make_sudakov(const ExperimentConfig& cfg) {
    const std::vector<int> ns = parse_n_list(cfg.overrides.at("n_list"));
    const int grid = static_cast<int>(as_integer(cfg.overrides.at("grid_size"), "grid_size"));
    const int quad = static_cast<int>(as_integer(cfg.overrides.at("quad_points"), "quad_points"));
    const int m = cfg.spec.m;
    io::CsvBuilder csv;
    csv_preamble(csv, cfg);
    csv.header({"n", "m", "epsilon_star", "sudakov", "sudakov_at_threshold_epsilon", "dudley",
                "sharp_lower", "sharp_upper", "sqrt_m_log_n"});
    for (int n : ns) {
        const BoundEnvelope env = predicted_envelope(m, n, quad, grid);
        const double eps_threshold =
            std::numbers::sqrt2 * std::sqrt(1.0 - 1.0 / static_cast<double>(n));
        csv.cell(static_cast<std::uint64_t>(n));
        csv.cell(static_cast<std::uint64_t>(m));
        csv.cell(env.sudakov_arg);
        csv.cell(env.sudakov_value);
        csv.cell(sudakov_at(m, n, eps_threshold));
        csv.cell(env.dudley_value);
        csv.cell(env.sharp_lower);
        csv.cell(env.sharp_upper);
        csv.cell(std::sqrt(m * std::log(static_cast<double>(n))));
        csv.end_row();
    }
    ArtifactSet out;
    out.durable.emplace_back("sudakov_m" + std::to_string(m) + ".csv", csv.str());
    return out;
}

inline ArtifactSet make_kernel_sweep(const ExperimentConfig& cfg) {
    const std::string regime_name = as_string(cfg.overrides.at("regime"), "regime");
    DecayRegime regime;
    if (regime_name == "gaussian") {
        regime = DecayRegime::gaussian;
    } else if (regime_name == "agmon") {
        regime = DecayRegime::agmon;
    } else {
        throw ConfigError("config: 'regime' must be 'gaussian' or 'agmon'");
    }
    DecayParams params;
    params.eps = as_number(cfg.overrides.at("eps"), "eps");
    params.lambda = as_number(cfg.overrides.at("lambda"), "lambda");
    const int points = static_cast<int>(as_integer(cfg.overrides.at("points"), "points"));
    if (points < 2) throw ConfigError("config: 'points' must be >= 2");

    const auto sweep = decay_sweep(cfg.spec.m, cfg.spec.n, regime, params,
                                   static_cast<std::size_t>(points));
    io::CsvBuilder csv;
    csv_preamble(csv, cfg);
    csv.header({"r", "abs_kernel", "envelope"});
    for (const DecaySample& s : sweep) {
        csv.cell(s.r);
        csv.cell(s.kernel_abs);
        csv.cell(s.envelope);
        csv.end_row();
    }
    ArtifactSet out;
    out.durable.emplace_back("kernel_sweep_m" + std::to_string(cfg.spec.m) + "_n" +
                                 std::to_string(cfg.spec.n) + "_" + regime_name + ".csv",
                             csv.str());
    return out;
}

inline ArtifactSet make_concentration(const ExperimentConfig& cfg) {
    if (!cfg.overrides.contains("study"))
        throw ConfigError("config: concentration requires override 'study' (path to study json)");
    const std::string path = as_string(cfg.overrides.at("study"), "study");
    std::filesystem::path study_path(path);
    if (study_path.is_relative() && !cfg.output_dir.empty() &&
        !std::filesystem::exists(study_path))
        study_path = std::filesystem::path(cfg.output_dir) / path;
    Json study_json;
    try {
        study_json = Json::parse(io::read_file(study_path));
    } catch (const Json::parse_error& e) {
        throw ConfigError("concentration: study artifact is not valid JSON: " +
                          std::string(e.what()));
    }
    const StudyReport report = study_report_from_json(study_json);
    const auto rows = concentration_check(report);
    io::CsvBuilder csv;
    csv_preamble(csv, cfg);
    csv.header({"r", "empirical", "levy_bound", "pass"});
    for (const ConcentrationRow& row : rows) {
        csv.cell(row.r);
        csv.cell(row.empirical);
        csv.cell(row.bound);
        csv.cell(static_cast<std::uint64_t>(row.pass ? 1 : 0));
        csv.end_row();
    }
    ArtifactSet out;
    out.durable.emplace_back("concentration_" + study_basename(report.spec) + ".csv", csv.str());
    return out;
}

inline ArtifactSet make_report(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    std::vector<fs::path> study_files;
    if (!cfg.output_dir.empty() && fs::exists(cfg.output_dir)) {
        for (const auto& entry : fs::directory_iterator(cfg.output_dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("study_", 0) == 0 && name.size() > 5 &&
                name.substr(name.size() - 5) == ".json")
                study_files.push_back(entry.path());
        }
    }
    std::sort(study_files.begin(), study_files.end());
    if (study_files.empty())
        throw ConfigError("report: no study artifacts found in output directory");

    std::vector<StudyReport> studies;
    std::vector<std::string> names;
    for (const fs::path& p : study_files) {
        studies.push_back(study_report_from_json(Json::parse(io::read_file(p))));
        names.push_back(p.filename().string());
    }
    for (std::size_t i = 1; i < studies.size(); ++i)
        if (studies[i].spec.measure != studies[0].spec.measure)
            throw ConfigError("report: refusing to mix studies with different ensemble measures");

    std::vector<std::size_t> order(studies.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (studies[a].spec.m != studies[b].spec.m) return studies[a].spec.m < studies[b].spec.m;
        return studies[a].spec.n < studies[b].spec.n;
    });

    Json rows = Json::array();
    for (std::size_t i : order) {
        const StudyReport& rep = studies[i];
        Json row = to_json(rep);
        row["file"] = names[i];
        row.erase("tail_profile");
        rows.push_back(std::move(row));
    }
    Json report_json{{"version", version},
                     {"config_digest", cfg.digest()},
                     {"measure", std::string(measure_name(studies[0].spec.measure))},
                     {"studies", std::move(rows)}};
    ArtifactSet out;
    out.durable.emplace_back("report.json", report_json.dump(2) + "\n");
    return out;
}

}  // namespace detail

// Runs the configured command and writes its artifacts atomically: every file
// is staged as a temp first, then the whole set is renamed into place, so a
// failure leaves no partial artifacts.
inline Manifest execute(const ExperimentConfig& cfg, int threads = 0) {
    namespace fs = std::filesystem;
    detail::ArtifactSet artifacts;
    switch (cfg.command) {
        case Command::study: artifacts = detail::make_study_artifacts(cfg, threads); break;
        case Command::metric_table: artifacts = detail::make_metric_table(cfg); break;
        case Command::covering: artifacts = detail::make_covering(cfg); break;
        case Command::dudley: artifacts = detail::make_dudley(cfg); break;
        case Command::sudakov: artifacts = detail::make_sudakov(cfg); break;
        case Command::kernel_sweep: artifacts = detail::make_kernel_sweep(cfg); break;
        case Command::concentration: artifacts = detail::make_concentration(cfg); break;
        case Command::report: artifacts = detail::make_report(cfg); break;
    }

    Manifest manifest;
    manifest.config = cfg.identity();
    manifest.config_digest = cfg.digest();
    for (const auto& [name, content] : artifacts.durable)
        manifest.files.emplace_back(name, io::hex64(io::fnv1a64(content)));
    for (const auto& [name, content] : artifacts.volatile_) {
        (void)content;
        manifest.volatile_files.push_back(name);
    }

    const fs::path dir = cfg.output_dir.empty() ? fs::path(".") : fs::path(cfg.output_dir);
    fs::create_directories(dir);

    std::vector<std::pair<std::string, std::string>> all = artifacts.durable;
    all.insert(all.end(), artifacts.volatile_.begin(), artifacts.volatile_.end());
    all.emplace_back("manifest.json", manifest.to_json().dump(2) + "\n");

    std::vector<fs::path> staged;
    try {
        for (const auto& [name, content] : all) {
            const fs::path tmp = dir / (name + ".staged");
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot stage artifact: " + tmp.string());
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            if (!out) throw std::runtime_error("write failed: " + tmp.string());
            out.close();
            staged.push_back(tmp);
        }
    } catch (...) {
        for (const fs::path& p : staged) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        throw;
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        std::error_code ec;
        fs::rename(staged[i], dir / all[i].first, ec);
        if (ec) throw std::runtime_error("rename failed: " + all[i].first + " (" + ec.message() + ")");
    }
    return manifest;
}

}  // namespace kostlan
