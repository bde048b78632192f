#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sticky/app/config.hpp"
#include "sticky/app/output.hpp"
#include "sticky/app/pipeline.hpp"

namespace fs = std::filesystem;
using namespace sticky;
using namespace sticky::app;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::vector<double> ladder;
    std::optional<std::uint64_t> seed;
    bool strict = false;
    std::vector<std::string> scale;
};

RunConfig load(const Options& o) {
    RunConfig cfg = load_config(o.config);
    if (!o.ladder.empty()) {
        for (std::size_t i = 0; i < o.ladder.size(); ++i)
            if (!(o.ladder[i] > 0.0) || (i > 0 && !(o.ladder[i] < o.ladder[i - 1])))
                throw ConfigError("--mesh-ladder", "mesh sizes must be positive and strictly decreasing");
        cfg.solver.ladder = o.ladder;
    }
    if (o.seed) cfg.solver.seed = *o.seed;
    if (!o.out.empty()) cfg.out_dir = o.out;
    return cfg;
}

std::map<std::string, double> parse_scale(const std::vector<std::string>& items) {
    std::map<std::string, double> out;
    for (const auto& s : items) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--debug-scale-bound", "expected KEY=FACTOR, got '" + s + "'");
        try {
            out[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("--debug-scale-bound", "bad factor in '" + s + "'");
        }
    }
    return out;
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& text) {
    if (cfg.out_dir.empty()) {
        std::cout << text;
        return;
    }
    fs::create_directories(cfg.out_dir);
    write_file((fs::path(cfg.out_dir) / name).string(), text);
}

void summary(const VerifyOutcome& v) {
    for (const auto& e : v.entries) {
        std::fprintf(stderr, "%-16s %-8s", e.name.c_str(), e.verdict.c_str());
        if (e.verdict == "PASS" || e.verdict == "FAIL")
            std::fprintf(stderr, " numeric=%.10g bound=%.10g margin=%.3g%s%s", e.numeric, e.bound, e.margin,
                         e.conditional ? " conditional" : "", e.flagged ? " flagged" : "");
        if (!e.note.empty()) std::fprintf(stderr, " (%s)", e.note.c_str());
        std::fputc('\n', stderr);
    }
}

int run_bounds_cmd(const Options& o) {
    const auto cfg = load(o);
    const auto out = run_bounds(cfg);
    emit(cfg, "bounds.json", dump(bounds_json(cfg, out)));
    return kExitOk;
}

int run_verify_cmd(const Options& o) {
    const auto cfg = load(o);
    VerifyOptions vo;
    vo.strict = o.strict;
    vo.bound_scale = parse_scale(o.scale);
    const auto out = run_verify(cfg, vo);
    emit(cfg, "verify.json", dump(verify_json(cfg, out, vo)));
    if (!cfg.out_dir.empty()) emit(cfg, "convergence.csv", convergence_csv(out.ladders));
    summary(out);
    return out.exit_code;
}

int run_convergence_cmd(const Options& o) {
    const auto cfg = load(o);
    const auto out = run_convergence(cfg, o.strict);
    if (cfg.out_dir.empty()) {
        std::cout << convergence_csv(out.ladders);
    } else {
        emit(cfg, "convergence.json", dump(convergence_json(cfg, out)));
        emit(cfg, "convergence.csv", convergence_csv(out.ladders));
    }
    for (const auto& [k, msg] : out.solver_errors) std::fprintf(stderr, "%s: %s\n", k.c_str(), msg.c_str());
    return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explicit Poincare and log-Sobolev bounds for sticky diffusions on rotationally symmetric benchmarks"};
    app.require_subcommand(1);
    Options o;

    auto* bounds = app.add_subcommand("bounds", "evaluate the explicit bounds");
    auto* verify = app.add_subcommand("verify", "compare the bounds with finite element estimates");
    auto* conv = app.add_subcommand("convergence", "mesh-refinement study of the spectral constants");
    for (auto* sub : {bounds, verify, conv}) {
        sub->add_option("config", o.config, "TOML configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory (default: stdout)");
    }
    for (auto* sub : {verify, conv}) {
        sub->add_option("--mesh-ladder", o.ladder, "decreasing mesh sizes, comma separated")->delimiter(',');
        sub->add_option("--seed", o.seed, "seed for the randomized log-Sobolev search");
        sub->add_flag("--strict", o.strict, "treat conditional or flagged entries as failures");
    }
    verify->add_option("--debug-scale-bound", o.scale, "KEY=FACTOR")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*bounds) return run_bounds_cmd(o);
        if (*verify) return run_verify_cmd(o);
        return run_convergence_cmd(o);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitConfig;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitSolver;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
}
