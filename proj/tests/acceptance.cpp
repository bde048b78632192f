// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sticky/app/config.hpp"
#include "sticky/app/pipeline.hpp"
#include "sticky/bounds/constant_weight.hpp"
#include "sticky/bounds/explicit.hpp"
#include "sticky/bounds/interpolation.hpp"
#include "sticky/comparison/comparison.hpp"
#include "sticky/spectral/entropy.hpp"
#include "sticky/spectral/study.hpp"

using namespace sticky;
using namespace sticky::spectral;

namespace {

constexpr double kPi = 3.14159265358979323846;
// (j'_{1,1})^2
constexpr double kDiskNeumann = 3.38995771667188873;

struct Result {
    bool pass = true;
    std::ostringstream detail;
    void check(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << " first failure: " << what << ";";
            pass = false;
        }
    }
};

Eigen::VectorXd random_probability(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd m(n);
    for (int i = 0; i < n; ++i) m(i) = u(rng);
    return m / m.sum();
}

Eigen::VectorXd random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> z;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = scale * z(rng);
    return v;
}

/// Grid search over 1e5 points, then ternary refinement of the bracketing cell.
double grid_inf_max(double a, double b, double c, double d) {
    constexpr int n = 100000;
    auto f = [&](double t) { return std::max(a + b * t, c - d * t); };
    int best = 0;
    double best_v = f(0.0);
    for (int i = 1; i < n; ++i) {
        const double v = f(double(i) / (n - 1));
        if (v < best_v) best_v = v, best = i;
    }
    double lo = double(std::max(best - 1, 0)) / (n - 1), hi = double(std::min(best + 1, n - 1)) / (n - 1);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        (f(m1) <= f(m2) ? hi : lo) = f(m1) <= f(m2) ? m2 : m1;
    }
    return std::min(best_v, f(0.5 * (lo + hi)));
}

Result criterion1() {
    Result r;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> off(0.0, 3.0), slope(0.01, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a = off(rng), b = slope(rng), c = off(rng), d = slope(rng);
        const double closed = inf_max_affine(a, b, c, d).value;
        const double grid = grid_inf_max(a, b, c, d);
        worst = std::max(worst, std::abs(closed - grid));
    }
    r.check(worst <= 1e-9, "closed form vs grid");
    r.detail << " 1000 inputs, max |closed - grid| = " << worst;
    return r;
}

Result criterion2() {
    Result r;
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> mass(0.05, 0.95);
    std::normal_distribution<double> z;
    double worst_var = 0.0, worst_ent = -INFINITY, worst_rothaus = -INFINITY;
    for (int i = 0; i < 1000; ++i) {
        MixtureSample s;
        s.A = mass(rng);
        s.B = 1 - s.A;
        s.m_int = random_probability(rng, 12);
        s.m_bd = random_probability(rng, 7);
        s.f_int = random_vector(rng, 12);
        s.f_bd = random_vector(rng, 7, 2.0);
        const double var = variance(s.values(), s.measure());
        worst_var = std::max(worst_var, std::abs(var - variance_mixture(s)) / (1 + var));
        const double ent = entropy_of_square(s.values(), s.measure());
        worst_ent = std::max(worst_ent, ent - entropy_mixture_bound(s, bernoulli_logfactor(s.A, s.B)));
    }
    for (int i = 0; i < 1000; ++i) {
        const auto m = random_probability(rng, 15);
        const Eigen::VectorXd f = random_vector(rng, 15);
        const auto [lhs, rhs] = rothaus_check(f, 3 * z(rng), m);
        worst_rothaus = std::max(worst_rothaus, lhs - rhs);
    }
    r.check(worst_var <= 1e-12, "variance mixture identity");
    r.check(worst_ent <= 1e-12, "entropy mixture inequality");
    r.check(worst_rothaus <= 1e-12, "Rothaus inequality");
    r.detail << " variance identity err " << worst_var << ", max entropy excess " << worst_ent
             << ", max Rothaus excess " << worst_rothaus;
    return r;
}

Result criterion3() {
    Result r;
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> k(-4, 4), gamma(-3, 3);
    double worst = 0.0;
    int finite = 0;
    for (int i = 0; i < 1000; ++i) {
        const double kk = k(rng), gg = gamma(rng);
        const double closed = h_first_zero(kk, gg);
        const double bisect = h_first_zero_bisection(kk, gg, 50.0);
        if (closed > 50.0) {
            r.check(std::isinf(bisect), "no zero in the scanned range");
        } else {
            ++finite;
            worst = std::max(worst, std::abs(closed - bisect));
        }
    }
    r.check(worst <= 1e-10, "first zero vs bisection");
    const auto c = BenchmarkGeometry::flat_disk(1.0).curvature();
    double worst_eq = 0.0;
    for (int i = 0; i < 999; ++i) {
        const double rho = i * 1e-3;
        const auto b = laplace_comp_bounds(c, rho);
        const double exact = -1.0 / (1.0 - rho);
        worst_eq = std::max({worst_eq, std::abs(b.lower - exact), std::abs(b.upper - exact)});
    }
    r.check(worst_eq <= 1e-12, "flat disk equality case");
    r.detail << " " << finite << " finite zeros, max err " << worst << "; flat disk equality err " << worst_eq;
    return r;
}

WeightPair constant_weights(const BenchmarkGeometry& g) {
    return normalize_weights(g, RadialProfile::constant(1.0), RadialProfile::constant(1.0));
}

Result criterion4() {
    Result r;
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    const auto forms = assemble_ladder(g, constant_weights(g), {0.1, 0.05, 0.025});
    const auto neumann = study(forms, Quantity::NeumannPoincare);
    const auto circle = study(forms, Quantity::BoundaryPoincare);
    const auto steklov = study(forms, Quantity::Steklov);
    const double e_neu = std::abs(neumann.fit.value - kDiskNeumann) / kDiskNeumann;
    const double e_circ = std::abs(circle.fit.value - 1.0);
    const double e_stek = std::abs(steklov.fit.value - 1.0);
    r.check(e_neu <= 0.01, "Neumann gap");
    r.check(e_circ <= 0.005, "circle gap");
    r.check(e_stek <= 0.01, "Steklov");
    r.detail << " Neumann " << neumann.fit.value << " (rel err " << e_neu << "), circle " << circle.fit.value
             << ", Steklov " << steklov.fit.value << "; DOF " << forms.back().size();
    return r;
}

struct MatrixCase {
    std::string name;
    std::string toml;
};

std::vector<MatrixCase> dominance_matrix() {
    const std::vector<std::pair<std::string, std::string>> geometries{
        {"flat_disk", "kind = \"flat_disk\"\nradius = 1.0\n"},
        {"spherical_cap", "kind = \"spherical_cap\"\nradius = 1.0\n"},
        {"hyperbolic_disk", "kind = \"hyperbolic_disk\"\nradius = 1.0\n"}};
    const std::vector<std::pair<std::string, std::string>> weights{{"constant", "alpha = \"1\"\nbeta = \"1\"\n"},
                                                                   {"gaussian", "alpha = \"exp(-r^2)\"\nbeta = \"1\"\n"}};
    std::vector<MatrixCase> out;
    for (const auto& [gname, gtoml] : geometries)
        for (const auto& [wname, wtoml] : weights)
            out.push_back({gname + "/" + wname,
                           "[geometry]\n" + gtoml + "[weights]\n" + wtoml +
                               "[inputs]\nC_la = \"numeric\"\nC_sib = \"numeric\"\nL_la = \"numeric\"\n"
                               "L_sib = \"numeric\"\nL_boundary = \"numeric\"\n"});
    return out;
}

std::map<std::string, app::VerifyOutcome>& matrix_outcomes() {
    static std::map<std::string, app::VerifyOutcome> cache;
    if (cache.empty())
        for (const auto& c : dominance_matrix()) cache[c.name] = app::run_verify(app::parse_config_string(c.toml));
    return cache;
}

Result criterion5() {
    Result r;
    int checked = 0, conditional = 0;
    for (const auto& [name, v] : matrix_outcomes()) {
        for (const char* required : {"C_mu", "C_hat", "sigma", "trace_norm", "L_mu", "L_hat"}) {
            auto it = std::find_if(v.entries.begin(), v.entries.end(), [&](const auto& e) { return e.name == required; });
            r.check(it != v.entries.end() && (it->verdict == "PASS"),
                    name + " " + required + (it == v.entries.end() ? " missing" : " " + it->verdict));
        }
        for (const auto& e : v.entries) {
            if (e.verdict == "SKIPPED") continue;
            ++checked;
            r.check(e.verdict == "PASS", name + " " + e.name + " " + e.verdict);
            if (e.bound_key == "L_mu_bound" || e.bound_key == "L_hat_bound") {
                r.check(e.conditional, name + " " + e.name + " not marked conditional");
                conditional += e.conditional;
            }
        }
    }
    r.detail << " " << matrix_outcomes().size() << " configurations, " << checked << " comparisons ("
             << conditional << " conditional log-Sobolev)";
    return r;
}

Result criterion6() {
    Result r;
    double worst = 0.0;
    const double C_la = 0.3, C_sib = 0.9, L_la = 0.7, L_sib = 1.9, L_bd = 1.3;
    for (const auto& g : {BenchmarkGeometry::flat_disk(1.0), BenchmarkGeometry::spherical_cap(kPi / 2),
                          BenchmarkGeometry::spherical_cap(1.0), BenchmarkGeometry::hyperbolic_disk(1.0)}) {
        const auto c = g.curvature();
        const auto hard = constant_weight::constants(g, c, C_la);
        for (double a : {0.2, 0.5, 0.8}) {
            const auto w = normalize_weights(g, RadialProfile::constant(a / g.volume()),
                                             RadialProfile::constant((1 - a) / g.boundary_length()));
            const double k1 = K1_general(g, w, c, C_la).value;
            const double kb = K_boundary(g, w, c, C_la).value;
            InterpolationInputs general{C_la, C_sib, L_la, L_sib, k1, 0, kb, L_bd, w.A, w.B};
            InterpolationInputs reduced{C_la, C_sib, L_la, L_sib, hard.K1, 0, hard.K_boundary, L_bd, a, 1 - a};
            auto rel = [](double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); };
            worst = std::max({worst, rel(k1, hard.K1), rel(kb, hard.K_boundary),
                              rel(interpolate_poincare(general).value, interpolate_poincare(reduced).value),
                              rel(interpolate_logsob(general).value, interpolate_logsob(reduced).value)});
        }
    }
    r.check(worst <= 1e-12, "constant-weight reduction");
    r.detail << " 4 geometries x 3 mass splits, max rel diff " << worst;
    return r;
}

Result criterion7() {
    Result r;
    int ladders = 0, exact = 0;
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& [name, v] : matrix_outcomes())
        for (const auto& [q, est] : v.ladders) {
            ++ladders;
            r.check(est.fit.acceptable(), name + " " + to_string(q) + " " + est.fit.status);
            if (est.fit.status == "exact") {
                ++exact;
            } else {
                lo = std::min(lo, est.fit.order);
                hi = std::max(hi, est.fit.order);
            }
        }
    double worst = 0.0;
    int pencils = 0;
    for (const auto& g : {BenchmarkGeometry::flat_disk(1.0), BenchmarkGeometry::spherical_cap(1.0)}) {
        const auto w = normalize_weights(g, RadialProfile::from_expression("exp(-r^2)"), RadialProfile::constant(1.0));
        const auto f = assemble(mesh(g, 0.05), g, w);
        r.check(f.size() <= kDenseCap, "dense comparison mesh too large");
        SolverOptions dense, lanczos;
        dense.path = SolverPath::Dense;
        lanczos.path = SolverPath::Lanczos;
        for (auto [K, M] : {std::pair{f.K_sticky(), f.M_total()}, std::pair{f.K_int, f.M_total()},
                            std::pair{f.K_int, f.M_int}}) {
            const double a = smallest_nonzero(K, M, dense).value, b = smallest_nonzero(K, M, lanczos).value;
            worst = std::max(worst, std::abs(a - b) / a);
            ++pencils;
        }
    }
    r.check(worst <= 1e-8, "dense vs Lanczos");
    r.detail << " " << ladders << " ladders, orders in [" << lo << ", " << hi << "], " << exact
             << " exact (no mesh dependence); dense vs Lanczos on " << pencils << " pencils max rel diff " << worst;
    return r;
}

Result criterion8() {
    Result r;
    std::mt19937_64 rng(808);
    const double eps = 1e-3;
    double lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i < 100; ++i) {
        const auto m = random_probability(rng, 30);
        const Eigen::VectorXd g = random_vector(rng, 30);
        const double ratio =
            entropy_of_square((Eigen::VectorXd::Ones(30) + eps * g).eval(), m) / (2 * eps * eps * variance(g, m));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    r.check(lo >= 1 - 5 * eps && hi <= 1 + 5 * eps, "linearization ratio");
    r.detail << " 100 samples, ratio in [" << lo << ", " << hi << "]";
    return r;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
        {"closed-form inf-max", criterion1},
        {"decomposition identities", criterion2},
        {"comparison functions", criterion3},
        {"spectral oracles", criterion4},
        {"bound dominance", criterion5},
        {"constant-weight reduction", criterion6},
        {"convergence order", criterion7},
        {"entropy linearization", criterion8}};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail << " exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu %s: %s;%s (%.1f s)\n", i + 1, r.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    r.detail.str().c_str(), secs);
        std::fflush(stdout);
        failures += !r.pass;
    }
    return failures == 0 ? 0 : 1;
}
