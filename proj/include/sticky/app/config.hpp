#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <toml.hpp>

#include "sticky/error.hpp"
#include "sticky/geometry/benchmark.hpp"
#include "sticky/geometry/curvature.hpp"
#include "sticky/geometry/expression.hpp"
#include "sticky/geometry/mesh.hpp"
#include "sticky/spectral/eigensolver.hpp"

namespace sticky::app {

inline constexpr int kSchemaVersion = 1;

/// A user-supplied constant: a number, "numeric" (estimate it with the
/// spectral module), or an expression in previously resolved constants.
struct InputSpec {
    enum class Kind { Number, Numeric, Expression };
    Kind kind = Kind::Numeric;
    double number = 0.0;
    std::string expression;
    std::string source;
};

struct SolverConfig {
    std::vector<double> ladder{0.1, 0.05, 0.025};
    std::size_t dof_cap = kDefaultDofCap;
    int dense_cap = spectral::kAutoDenseCap;
    double lsi_h = 0.1;
    int lsi_restarts = 32;
    int lsi_iterations = 150;
    std::uint64_t seed = 20240917;
};

struct RunConfig {
    std::string path;
    GeometrySpec geometry;
    std::string alpha = "1";
    std::string beta = "1";
    CurvatureBounds curvature;  ///< geometry defaults with overrides applied
    bool coinciding = false;
    std::optional<double> ii_lower;
    SolverConfig solver;
    std::map<std::string, InputSpec> inputs;  ///< C_la, C_sib, L_la, L_sib, L_boundary
    std::optional<std::string> sobolev;       ///< unweighted C_{q,2} as an expression in q
    std::vector<std::string> bounds;          ///< report filter; empty = everything
    std::string out_dir;
};

inline const std::vector<std::string>& input_names() {
    static const std::vector<std::string> names{"C_la", "C_sib", "L_la", "L_sib", "L_boundary"};
    return names;
}

namespace detail {

inline std::string join_path(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
}

inline void reject_unknown(const toml::table& t, const std::string& section, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : t) {
        const std::string key(k.str());
        if (!allowed.count(key)) throw ConfigError(join_path(section, key), "unknown key");
    }
}

inline const toml::table* section(const toml::table& root, const std::string& name, bool required) {
    const auto* node = root.get(name);
    if (!node) {
        if (required) throw ConfigError(name, "missing section");
        return nullptr;
    }
    const auto* t = node->as_table();
    if (!t) throw ConfigError(name, "must be a table");
    return t;
}

inline std::optional<double> number(const toml::table& t, const std::string& sec, const std::string& key) {
    const auto* node = t.get(key);
    if (!node) return std::nullopt;
    if (auto v = node->value<double>()) {
        if (!std::isfinite(*v)) throw ConfigError(join_path(sec, key), "must be finite");
        return *v;
    }
    if (auto s = node->value<std::string>()) {
        if (*s == "inf" || *s == "infinity") return std::numeric_limits<double>::infinity();
    }
    throw ConfigError(join_path(sec, key), "must be a number");
}

inline std::optional<bool> boolean(const toml::table& t, const std::string& sec, const std::string& key) {
    const auto* node = t.get(key);
    if (!node) return std::nullopt;
    if (auto v = node->value<bool>()) return *v;
    throw ConfigError(join_path(sec, key), "must be a boolean");
}

inline std::optional<std::string> string(const toml::table& t, const std::string& sec, const std::string& key) {
    const auto* node = t.get(key);
    if (!node) return std::nullopt;
    if (auto v = node->value<std::string>()) return *v;
    throw ConfigError(join_path(sec, key), "must be a string");
}

inline std::optional<std::int64_t> integer(const toml::table& t, const std::string& sec, const std::string& key) {
    const auto* node = t.get(key);
    if (!node) return std::nullopt;
    if (auto v = node->value_exact<std::int64_t>()) return *v;
    throw ConfigError(join_path(sec, key), "must be an integer");
}

inline void check_expression(const std::string& text, const std::set<std::string>& vars, const std::string& path) {
    try {
        (void)Expression::parse(text, vars);
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
}

inline GeometryKind parse_kind(const std::string& s, const std::string& path) {
    if (s == "flat_disk") return GeometryKind::FlatDisk;
    if (s == "spherical_cap") return GeometryKind::SphericalCap;
    if (s == "hyperbolic_disk") return GeometryKind::HyperbolicDisk;
    throw ConfigError(path, "unknown geometry '" + s + "' (flat_disk, spherical_cap, hyperbolic_disk)");
}

inline InputSpec parse_input(const toml::node& node, const std::string& path, const std::set<std::string>& vars) {
    InputSpec in;
    const toml::node* value = &node;
    if (const auto* t = node.as_table()) {
        reject_unknown(*t, path, {"value", "source"});
        value = t->get("value");
        if (!value) throw ConfigError(path + ".value", "missing");
        if (auto s = string(*t, path, "source")) in.source = *s;
    }
    if (auto v = value->value<double>()) {
        if (!(std::isfinite(*v) && *v >= 0.0)) throw ConfigError(path, "must be a finite nonnegative number");
        in.kind = InputSpec::Kind::Number;
        in.number = *v;
    } else if (auto s = value->value<std::string>()) {
        if (*s == "numeric") {
            in.kind = InputSpec::Kind::Numeric;
        } else {
            check_expression(*s, vars, path);
            in.kind = InputSpec::Kind::Expression;
            in.expression = *s;
        }
    } else {
        throw ConfigError(path, "must be a number, \"numeric\", or an expression string");
    }
    return in;
}

}  // namespace detail

/// Parses and validates a run configuration. Every range stated by the
/// consuming modules is checked here so errors carry a key path.
inline RunConfig parse_config(const toml::table& root, const std::string& origin = "") {
    using namespace detail;
    RunConfig cfg;
    cfg.path = origin;
    reject_unknown(root, "", {"geometry", "weights", "assumptions", "solver", "inputs", "outputs"});

    const auto* geo = section(root, "geometry", true);
    reject_unknown(*geo, "geometry", {"kind", "radius"});
    const auto kind = string(*geo, "geometry", "kind");
    if (!kind) throw ConfigError("geometry.kind", "missing");
    cfg.geometry.kind = parse_kind(*kind, "geometry.kind");
    cfg.geometry.parameter = number(*geo, "geometry", "radius").value_or(1.0);
    BenchmarkGeometry g = BenchmarkGeometry::flat_disk(1.0);
    try {
        g = make_geometry(cfg.geometry);
    } catch (const DomainError& e) {
        throw ConfigError("geometry.radius", e.what());
    }

    if (const auto* w = section(root, "weights", false)) {
        reject_unknown(*w, "weights", {"alpha", "beta"});
        cfg.alpha = string(*w, "weights", "alpha").value_or("1");
        cfg.beta = string(*w, "weights", "beta").value_or("1");
    }
    check_expression(cfg.alpha, {"r"}, "weights.alpha");
    check_expression(cfg.beta, {"r"}, "weights.beta");

    cfg.curvature = g.curvature();
    if (const auto* a = section(root, "assumptions", false)) {
        reject_unknown(*a, "assumptions",
                       {"d", "k1", "k2", "gamma1", "gamma2", "n", "k_alpha_n", "beta_equals_alpha_on_boundary",
                        "H_alpha_integral_nonneg", "H_alpha_pointwise_nonneg", "II_lower_positive", "coinciding",
                        "ii_lower"});
        auto& c = cfg.curvature;
        if (auto d = integer(*a, "assumptions", "d")) {
            if (*d < 2) throw ConfigError("assumptions.d", "must be at least 2");
            c.d = static_cast<int>(*d);
        }
        c.k1 = number(*a, "assumptions", "k1").value_or(c.k1);
        c.k2 = number(*a, "assumptions", "k2").value_or(c.k2);
        c.gamma1 = number(*a, "assumptions", "gamma1").value_or(c.gamma1);
        c.gamma2 = number(*a, "assumptions", "gamma2").value_or(c.gamma2);
        c.n = number(*a, "assumptions", "n").value_or(c.n);
        if (auto k = number(*a, "assumptions", "k_alpha_n")) c.k_alpha_n = *k;
        c.flags.beta_equals_alpha_on_boundary =
            boolean(*a, "assumptions", "beta_equals_alpha_on_boundary").value_or(false);
        c.flags.H_alpha_integral_nonneg = boolean(*a, "assumptions", "H_alpha_integral_nonneg").value_or(false);
        c.flags.H_alpha_pointwise_nonneg = boolean(*a, "assumptions", "H_alpha_pointwise_nonneg").value_or(false);
        c.flags.II_lower_positive = boolean(*a, "assumptions", "II_lower_positive").value_or(false);
        cfg.coinciding = boolean(*a, "assumptions", "coinciding").value_or(false);
        cfg.ii_lower = number(*a, "assumptions", "ii_lower");
        if (cfg.coinciding) {
            if (!c.k_alpha_n) throw ConfigError("assumptions.k_alpha_n", "required when coinciding = true");
            if (!(*c.k_alpha_n > 0.0))
                throw ConfigError("assumptions.k_alpha_n", "coinciding-weight bounds need k_alpha_n > 0");
        }
        try {
            c.validate();
        } catch (const DomainError& e) {
            throw ConfigError("assumptions", e.what());
        }
    }

    if (const auto* s = section(root, "solver", false)) {
        reject_unknown(*s, "solver",
                       {"ladder", "dof_cap", "dense_cap", "lsi_h", "lsi_restarts", "lsi_iterations", "seed"});
        auto& sc = cfg.solver;
        if (const auto* node = s->get("ladder")) {
            const auto* arr = node->as_array();
            if (!arr) throw ConfigError("solver.ladder", "must be an array of mesh sizes");
            sc.ladder.clear();
            for (const auto& e : *arr) {
                auto v = e.value<double>();
                if (!v || !(*v > 0.0)) throw ConfigError("solver.ladder", "mesh sizes must be positive numbers");
                sc.ladder.push_back(*v);
            }
        }
        if (auto v = integer(*s, "solver", "dof_cap")) {
            if (*v < 16) throw ConfigError("solver.dof_cap", "must be at least 16");
            sc.dof_cap = static_cast<std::size_t>(*v);
        }
        if (auto v = integer(*s, "solver", "dense_cap")) {
            if (*v < 0 || *v > spectral::kDenseCap)
                throw ConfigError("solver.dense_cap", "must lie in [0, " + std::to_string(spectral::kDenseCap) + "]");
            sc.dense_cap = static_cast<int>(*v);
        }
        if (auto v = number(*s, "solver", "lsi_h")) sc.lsi_h = *v;
        if (auto v = integer(*s, "solver", "lsi_restarts")) {
            if (*v < 0) throw ConfigError("solver.lsi_restarts", "must be nonnegative");
            sc.lsi_restarts = static_cast<int>(*v);
        }
        if (auto v = integer(*s, "solver", "lsi_iterations")) {
            if (*v < 1) throw ConfigError("solver.lsi_iterations", "must be positive");
            sc.lsi_iterations = static_cast<int>(*v);
        }
        if (auto v = integer(*s, "solver", "seed")) sc.seed = static_cast<std::uint64_t>(*v);
    }
    for (std::size_t i = 0; i < cfg.solver.ladder.size(); ++i)
        if (i > 0 && !(cfg.solver.ladder[i] < cfg.solver.ladder[i - 1]))
            throw ConfigError("solver.ladder", "mesh sizes must be strictly decreasing");
    if (cfg.solver.ladder.empty()) throw ConfigError("solver.ladder", "must not be empty");
    if (!(cfg.solver.lsi_h > 0.0)) throw ConfigError("solver.lsi_h", "must be positive");

    if (const auto* in = section(root, "inputs", false)) {
        std::set<std::string> allowed(input_names().begin(), input_names().end());
        allowed.insert("sobolev");
        reject_unknown(*in, "inputs", allowed);
        std::set<std::string> vars{"A", "B"};
        for (const auto& name : input_names()) {
            if (const auto* node = in->get(name)) cfg.inputs[name] = parse_input(*node, "inputs." + name, vars);
            vars.insert(name);
        }
        if (auto s = string(*in, "inputs", "sobolev")) {
            check_expression(*s, {"q", "d"}, "inputs.sobolev");
            cfg.sobolev = *s;
        }
    }
    for (const char* required : {"C_la", "C_sib"})
        if (!cfg.inputs.count(required)) cfg.inputs[required] = InputSpec{};  // numeric by default

    if (const auto* o = section(root, "outputs", false)) {
        reject_unknown(*o, "outputs", {"dir", "bounds"});
        cfg.out_dir = string(*o, "outputs", "dir").value_or("");
        if (const auto* node = o->get("bounds")) {
            const auto* arr = node->as_array();
            if (!arr) throw ConfigError("outputs.bounds", "must be an array of report keys");
            for (const auto& e : *arr) {
                auto v = e.value<std::string>();
                if (!v) throw ConfigError("outputs.bounds", "entries must be strings");
                cfg.bounds.push_back(*v);
            }
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::string& file) {
    try {
        return parse_config(toml::parse_file(file), file);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << e.description() << " (line " << e.source().begin.line << ")";
        throw ConfigError(file, msg.str());
    }
}

inline RunConfig parse_config_string(std::string_view text) {
    try {
        return parse_config(toml::parse(text), "<string>");
    } catch (const toml::parse_error& e) {
        throw ConfigError("<string>", std::string(e.description()));
    }
}

}  // namespace sticky::app
