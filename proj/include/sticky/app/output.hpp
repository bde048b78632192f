#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"

#include "sticky/app/pipeline.hpp"

namespace sticky::app {

using Json = nlohmann::json;

/// Finite values as numbers, the rest as "inf", "-inf" or "nan".
inline Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

/// Shortest round-trip decimal form.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline Json to_json(const BoundEntry& e) {
    Json j;
    j["value"] = number(e.value);
    j["conditional"] = e.conditional;
    j["vacuous"] = e.vacuous;
    j["assumptions"] = e.assumptions;
    Json d = Json::object();
    for (const auto& [k, v] : e.details) d[k] = number(v);
    j["details"] = d;
    if (!e.note.empty()) j["note"] = e.note;
    return j;
}

inline Json to_json(const ResolvedInput& r) {
    Json j;
    j["value"] = number(r.value);
    j["kind"] = r.kind;
    j["source"] = r.source;
    j["heuristic"] = r.heuristic;
    if (!r.note.empty()) j["expression"] = r.note;
    return j;
}

inline Json to_json(const spectral::Extrapolation& f) {
    Json j;
    j["value"] = number(f.value);
    j["order"] = number(f.order);
    j["coefficient"] = number(f.coefficient);
    j["residual"] = number(f.residual);
    j["status"] = f.status;
    return j;
}

inline Json to_json(const spectral::SpectralEstimate& e) {
    Json j;
    Json levels = Json::array();
    for (std::size_t i = 0; i < e.h.size(); ++i)
        levels.push_back({{"h", number(e.h[i])},
                          {"dof", e.dof[i]},
                          {"eigenvalue", number(e.eigenvalues[i])},
                          {"value", number(e.values[i])},
                          {"residual", number(e.residuals[i])}});
    j["levels"] = levels;
    j["method"] = e.method;
    j["richardson"] = to_json(e.fit);
    j["value"] = number(e.value);
    j["max_residual"] = number(e.max_residual);
    return j;
}

inline Json to_json(const spectral::LsiEstimate& e) {
    return {{"value", number(e.value)},
            {"degenerate", e.degenerate},
            {"best_start", e.best_start},
            {"starts", e.starts},
            {"warm_value", number(e.warm_value)}};
}

inline Json config_json(const RunConfig& cfg) {
    Json j;
    j["geometry"] = {{"kind", to_string(cfg.geometry.kind)}, {"parameter", number(cfg.geometry.parameter)}};
    j["weights"] = {{"alpha", cfg.alpha}, {"beta", cfg.beta}};
    const auto& c = cfg.curvature;
    j["assumptions"] = {{"d", c.d},
                        {"k1", number(c.k1)},
                        {"k2", number(c.k2)},
                        {"gamma1", number(c.gamma1)},
                        {"gamma2", number(c.gamma2)},
                        {"n", number(c.n)},
                        {"k_alpha_n", c.k_alpha_n ? number(*c.k_alpha_n) : Json(nullptr)},
                        {"coinciding", cfg.coinciding}};
    Json ladder = Json::array();
    for (double h : cfg.solver.ladder) ladder.push_back(number(h));
    j["solver"] = {{"ladder", ladder},
                   {"dof_cap", cfg.solver.dof_cap},
                   {"dense_cap", cfg.solver.dense_cap},
                   {"lsi_h", number(cfg.solver.lsi_h)},
                   {"lsi_restarts", cfg.solver.lsi_restarts},
                   {"lsi_iterations", cfg.solver.lsi_iterations},
                   {"seed", cfg.solver.seed}};
    return j;
}

inline Json bounds_json(const RunConfig& cfg, const BoundsOutcome& b) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "bounds";
    j["config"] = config_json(cfg);
    j["measure"] = {{"A", number(b.weights.A)}, {"B", number(b.weights.B)}};
    Json entries = Json::object();
    for (const auto& [key, e] : b.report.entries) {
        if (!cfg.bounds.empty() && std::find(cfg.bounds.begin(), cfg.bounds.end(), key) == cfg.bounds.end()) continue;
        entries[key] = to_json(e);
    }
    j["bounds"] = entries;
    Json skipped = Json::object();
    for (const auto& [key, why] : b.report.skipped) skipped[key] = why;
    j["skipped"] = skipped;
    Json inputs = Json::object();
    for (const auto& [k, r] : b.inputs) inputs[k] = to_json(r);
    j["conditional_inputs"] = inputs;
    return j;
}

inline Json verify_json(const RunConfig& cfg, const VerifyOutcome& v, const VerifyOptions& opt) {
    Json j = bounds_json(cfg, v.bounds);
    j["command"] = "verify";
    j["strict"] = opt.strict;
    Json entries = Json::array();
    for (const auto& e : v.entries) {
        Json x;
        x["name"] = e.name;
        x["bound_key"] = e.bound_key;
        x["relation"] = e.relation == Relation::AtMost ? "numeric <= bound" : "numeric >= bound";
        x["verdict"] = e.verdict;
        if (e.verdict != "SKIPPED" && e.verdict != "ERROR") {
            x["numeric"] = number(e.numeric);
            x["bound"] = number(e.bound);
            x["margin"] = number(e.margin);
            x["numeric_source"] = e.numeric_source;
        }
        x["conditional"] = e.conditional;
        x["flagged"] = e.flagged;
        if (!e.note.empty()) x["note"] = e.note;
        entries.push_back(x);
    }
    j["verification"] = entries;
    Json ladders = Json::object();
    for (const auto& [q, est] : v.ladders) ladders[spectral::to_string(q)] = to_json(est);
    j["spectral"] = ladders;
    Json lsi = Json::object();
    for (const auto& [l, est] : v.lsi) lsi[spectral::to_string(l)] = to_json(est);
    j["lsi"] = lsi;
    Json errors = Json::object();
    for (const auto& [k, msg] : v.solver_errors) errors[k] = msg;
    j["solver_errors"] = errors;
    j["exit_code"] = v.exit_code;
    return j;
}

inline Json convergence_json(const RunConfig& cfg, const ConvergenceOutcome& c) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "convergence";
    j["config"] = config_json(cfg);
    Json ladders = Json::object();
    for (const auto& [q, est] : c.ladders) ladders[spectral::to_string(q)] = to_json(est);
    j["spectral"] = ladders;
    Json errors = Json::object();
    for (const auto& [k, msg] : c.solver_errors) errors[k] = msg;
    j["solver_errors"] = errors;
    j["exit_code"] = c.exit_code;
    return j;
}

inline constexpr const char* kCsvHeader = "quantity,level,h,dof,eigenvalue,value,residual";

/// One row per mesh level plus a "richardson" row with the extrapolated eigenvalue.
inline std::string convergence_csv(const std::map<Quantity, spectral::SpectralEstimate>& ladders) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const auto& [q, est] : ladders) {
        const auto name = spectral::to_string(q);
        for (std::size_t i = 0; i < est.h.size(); ++i)
            os << name << ',' << i << ',' << format_double(est.h[i]) << ',' << est.dof[i] << ','
               << format_double(est.eigenvalues[i]) << ',' << format_double(est.values[i]) << ','
               << format_double(est.residuals[i]) << '\n';
        os << name << ",richardson,0,," << format_double(est.fit.value) << ',' << format_double(est.value) << ','
           << format_double(est.fit.residual) << '\n';
    }
    return os.str();
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("outputs.dir", "cannot write " + path);
    f << text;
}

}  // namespace sticky::app
