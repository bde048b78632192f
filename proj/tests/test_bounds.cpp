#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sticky/bounds/constant_weight.hpp"
#include "sticky/bounds/report.hpp"

using namespace sticky;
using numerics::kInf;
using numerics::kPi;

namespace {

// Neumann gap of the unit disk is j'_{1,1}^2.
constexpr double kDiskCla = 1.0 / 3.38995771667188873;

WeightPair constant_weights(const BenchmarkGeometry& g, double boundary_factor = 1.0) {
    return normalize_weights(g, RadialProfile::constant(1.0), RadialProfile::constant(boundary_factor));
}

double grid_inf_max(double a, double b, double c, double d, int n) {
    double best = kInf;
    for (int i = 0; i < n; ++i) {
        const double t = double(i) / (n - 1);
        best = std::min(best, std::max(a + b * t, c - d * t));
    }
    return best;
}

InterpolationInputs random_inputs(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 3.0), mass(0.05, 0.95);
    InterpolationInputs in;
    in.C_la = u(rng);
    in.C_sib = u(rng);
    in.L_la = u(rng);
    in.L_sib = u(rng);
    in.K1 = u(rng);
    in.K2 = u(rng) * 0.5;
    in.K_boundary = u(rng);
    in.L_boundary = u(rng);
    in.A = mass(rng);
    in.B = 1.0 - in.A;
    return in;
}

}  // namespace

TEST(InfMax, Examples) {
    auto r = inf_max_affine(1, 1, 2, 1);
    EXPECT_DOUBLE_EQ(r.value, 1.5);
    EXPECT_DOUBLE_EQ(r.t, 0.5);
    r = inf_max_affine(5, 1, 2, 1);
    EXPECT_DOUBLE_EQ(r.value, 5.0);
    EXPECT_EQ(r.t, 0.0);
    r = inf_max_affine(0, 1, 10, 2);
    EXPECT_DOUBLE_EQ(r.value, 8.0);
    EXPECT_EQ(r.t, 1.0);
}

TEST(InfMax, RejectsBadSlopes) {
    EXPECT_THROW(inf_max_affine(1, 0, 1, 1), DomainError);
    EXPECT_THROW(inf_max_affine(1, 1, 1, -1), DomainError);
    EXPECT_THROW(inf_max_affine(-1, 1, 1, 1), DomainError);
}

TEST(InfMax, AgreesWithGridSearch) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 5.0), slope(0.01, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double a = u(rng), b = slope(rng), c = u(rng), d = slope(rng);
        const auto r = inf_max_affine(a, b, c, d);
        const double grid = grid_inf_max(a, b, c, d, 20001);
        EXPECT_LE(r.value, grid + 1e-12);
        EXPECT_GE(r.value, grid - (b + d) / 20000);
        EXPECT_NEAR(std::max(a + b * r.t, c - d * r.t), r.value, 1e-12);
    }
}

TEST(PoincareInterpolation, Examples) {
    InterpolationInputs in;
    in.C_la = 1;
    in.C_sib = 1;
    in.K1 = 1;
    in.K_boundary = 1;
    EXPECT_DOUBLE_EQ(interpolate_poincare(in).value, 1.5);
    in.C_la = 0;
    in.K1 = 0;
    EXPECT_DOUBLE_EQ(interpolate_poincare(in).value, 0.5);
}

TEST(PoincareInterpolation, MatchesMaxOfThreeForm) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 500; ++i) {
        const auto in = random_inputs(rng);
        EXPECT_NEAR(interpolate_poincare(in).value, poincare_max_form(in), 1e-12);
    }
}

TEST(PoincareInterpolation, DegenerateBoundaryConstants) {
    InterpolationInputs in;
    in.C_la = 0.3;
    in.K1 = 0.2;
    // C_sib = 0 and K_boundary = 0: both lines are flat.
    EXPECT_DOUBLE_EQ(interpolate_poincare(in).value, 0.3 + 0.5 * 0.2);
    in.C_sib = 0;
    in.K_boundary = 2.0;
    EXPECT_DOUBLE_EQ(interpolate_poincare(in).value, 0.4);
}

TEST(PoincareInterpolation, MonotoneInEveryInput) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> bump(0.0, 0.5);
    for (int i = 0; i < 300; ++i) {
        const auto in = random_inputs(rng);
        const double base = interpolate_poincare(in).value;
        for (double InterpolationInputs::*field : {&InterpolationInputs::C_la, &InterpolationInputs::C_sib,
                                                   &InterpolationInputs::K1, &InterpolationInputs::K2,
                                                   &InterpolationInputs::K_boundary}) {
            auto up = in;
            up.*field += bump(rng);
            EXPECT_GE(interpolate_poincare(up).value, base - 1e-12);
        }
    }
}

TEST(PoincareNoBoundaryDiffusion, Examples) {
    EXPECT_DOUBLE_EQ(poincare_no_bd(1, 1, 1, 0.5, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(poincare_no_bd(0.7, 0, 0, 0.3, 0.7), 0.7);
}

TEST(Coinciding, Examples) {
    AssumptionFlags f;
    f.beta_equals_alpha_on_boundary = true;
    f.H_alpha_integral_nonneg = true;
    f.H_alpha_pointwise_nonneg = true;
    f.II_lower_positive = true;
    EXPECT_DOUBLE_EQ(coinciding_K1(kInf, 2.0, f), 0.5);
    EXPECT_DOUBLE_EQ(coinciding_direct(kInf, 2.0, 1.0, f), 3.0);
    EXPECT_DOUBLE_EQ(coinciding_direct(2.0, 1.0, 1.0, f), 2.5);
    EXPECT_DOUBLE_EQ(coinciding_K1(3.0, 1.0, f), 2.0 / 3.0);
}

TEST(Coinciding, RequiresFlagsAndPositiveCurvature) {
    AssumptionFlags f;
    EXPECT_THROW(coinciding_K1(kInf, 2.0, f), AssumptionError);
    f.beta_equals_alpha_on_boundary = true;
    EXPECT_THROW(coinciding_K1(kInf, 2.0, f), AssumptionError);
    f.H_alpha_integral_nonneg = true;
    EXPECT_THROW(coinciding_K1(kInf, 0.0, f), DomainError);
    EXPECT_THROW(coinciding_K1(kInf, -1.0, f), DomainError);
    EXPECT_THROW(coinciding_direct(kInf, 2.0, 1.0, f), AssumptionError);
    f.H_alpha_pointwise_nonneg = true;
    f.II_lower_positive = true;
    EXPECT_THROW(coinciding_direct(kInf, 2.0, 0.0, f), DomainError);
    CurvatureBounds c;
    c.flags = f;
    EXPECT_THROW(coinciding_K1(c), DomainError);  // k_alpha_n missing
}

TEST(BernoulliFactor, Values) {
    EXPECT_NEAR(bernoulli_logfactor(1.0 / 3, 2.0 / 3), 3 * std::log(2.0), 1e-14);
    EXPECT_DOUBLE_EQ(bernoulli_logfactor(0.5, 0.5), 2.0);
    EXPECT_NEAR(bernoulli_logfactor(0.2, 0.8), std::log(4.0) / 0.6, 1e-14);
    EXPECT_THROW(bernoulli_logfactor(0.0, 1.0), DomainError);
}

TEST(BernoulliFactor, SymmetricAndAtLeastTwo) {
    for (double A = 0.01; A < 0.995; A += 0.01) {
        EXPECT_DOUBLE_EQ(bernoulli_logfactor(A, 1 - A), bernoulli_logfactor(1 - A, A));
        EXPECT_GE(bernoulli_logfactor(A, 1 - A), 2.0);
    }
    EXPECT_NEAR(bernoulli_logfactor(0.5 + 1e-7, 0.5 - 1e-7), 2.0, 1e-12);
}

TEST(LogSobInterpolation, AgreesWithGrid) {
    std::mt19937_64 rng(31);
    const int n = 256;
    for (int trial = 0; trial < 200; ++trial) {
        auto in = random_inputs(rng);
        if (trial % 4 == 0) in.K1 = in.K2 = in.K_boundary = in.L_boundary = 0.0;
        const auto exact = interpolate_logsob(in);
        double grid_min = kInf;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double v = logsob_objective(in, double(i) / (n - 1), double(j) / (n - 1));
                grid_min = std::min(grid_min, v);
                ASSERT_LE(exact.value, v + 1e-12);
            }
        const double lf = exact.logfactor;
        const double lip = in.L_boundary * in.B / in.A + in.L_sib + in.B * lf * in.K_boundary + in.A * lf * in.C_sib;
        EXPECT_GE(exact.value, grid_min - lip / (n - 1));
        EXPECT_NEAR(logsob_objective(in, exact.s, exact.t), exact.value, 1e-12);
    }
}

TEST(LogSobInterpolation, SymmetricToyInputs) {
    InterpolationInputs in{1, 1, 1, 1, 1, 1, 1, 1, 0.5, 0.5};
    const auto r = interpolate_logsob(in);
    double grid = kInf;
    for (int i = 0; i < 256; ++i)
        for (int j = 0; j < 256; ++j) grid = std::min(grid, logsob_objective(in, i / 255.0, j / 255.0));
    EXPECT_LE(r.value, grid);
    EXPECT_GE(r.value, grid - 6.0 / 255);
}

TEST(LogSobNoBoundaryDiffusion, Examples) {
    EXPECT_DOUBLE_EQ(logsob_no_bd(1, 0, 0, 0, 0, 0.5, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(logsob_no_bd(1, 1, 1, 1, 1, 0.5, 0.5), 5.0);
}

TEST(Steklov, KFromSteklovExamples) {
    EXPECT_DOUBLE_EQ(K_from_steklov(1.0, 1.0 / 3, 2.0 / 3), 0.5);
    EXPECT_DOUBLE_EQ(K_from_steklov(2.0, 0.5, 0.5), 0.5);
    EXPECT_THROW(K_from_steklov(0.0, 0.5, 0.5), DomainError);
}

TEST(Sobolev, WeightedConstant) {
    EXPECT_NEAR(weighted_sobolev_const(4, 2, 1.0, 4.0, 1.0), std::sqrt(2.0), 1e-15);
    EXPECT_EQ(weighted_sobolev_const(4, 2, 0.0, 4.0, 1.0), 0.0);
    // constant alpha = beta on the disk: |beta|/B = 1/(3 pi)/(2/3), |A/alpha| = pi
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    const auto w = constant_weights(g);
    EXPECT_NEAR(weighted_sobolev_const(3, 2, 2.0, w),
                std::pow(1 / (2 * kPi), 1.0 / 3) * std::sqrt(kPi) * 2.0, 1e-13);
}

TEST(Sobolev, BoundaryInteriorConstant) {
    EXPECT_EQ(boundary_interior_sobolev(3, 3, 1, 1, 1, 1, 0, 0, 0), 0.0);
    EXPECT_NEAR(boundary_interior_sobolev(4, 3, 1, 1, 0.5, 0.5, 1, 1, 1), 3.0, 1e-14);
    EXPECT_THROW(boundary_interior_sobolev(4, 2, 1, 1, 0.5, 0.5, 1, 1, 1), DomainError);
    EXPECT_THROW(boundary_interior_sobolev(4.5, 3, 1, 1, 0.5, 0.5, 1, 1, 1), DomainError);
    EXPECT_THROW(boundary_interior_sobolev(1.5, 3, 1, 1, 0.5, 0.5, 1, 1, 1), DomainError);
}

TEST(Sobolev, EntropyTerm) {
    EXPECT_NEAR(entropy_from_trace(4, 3, std::exp(1.0)), 2.0, 1e-15);
    EXPECT_NEAR(entropy_from_trace(3, 3, std::exp(1.0)), 3.0, 1e-15);
    EXPECT_THROW(entropy_from_trace(2, 3, 1.0), DomainError);
    double prev = 0.0;
    for (double p = 2.5; p > 2.0 + 1e-9; p = 2.0 + (p - 2.0) / 2) {
        const double v = entropy_from_trace(p, 3, 1.0);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(Sobolev, BoundaryEntropyComposition) {
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    const auto w = constant_weights(g);
    EXPECT_EQ(L_boundary_interior(3, 0.0, w, 0.0, [](double) { return 0.0; }).value, 0.0);
    const auto r = L_boundary_interior(3, 1.3, w, 0.4, [](double) { return 1.0; });
    const double c1 = weighted_sobolev_const(2 * (r.p - 1), 2, 1.0, w);
    const double c2 = weighted_sobolev_const(r.p, 2, 1.0, w);
    const double ct = boundary_interior_sobolev(r.p, 3, 1.0, w.beta_over_alpha_sup, w.A, w.B, c1, c2, 1.3);
    EXPECT_NEAR(r.entropy_term, entropy_from_trace(r.p, 3, ct), 1e-14);
    EXPECT_NEAR(r.rothaus_term, 2 * w.A / w.B * (0.4 * 1.3 + 2 * std::sqrt(0.4)), 1e-14);
    EXPECT_NEAR(r.value, r.entropy_term + r.rothaus_term, 1e-14);
    // the inf over p is no worse than the right endpoint
    EXPECT_LE(r.entropy_term, entropy_from_trace(4.0, 3,
                                                 boundary_interior_sobolev(4.0, 3, 1.0, w.beta_over_alpha_sup, w.A,
                                                                           w.B, weighted_sobolev_const(6, 2, 1, w),
                                                                           weighted_sobolev_const(4, 2, 1, w), 1.3)));
}

TEST(Explicit, ZeroPoincareConstant) {
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    const auto w = constant_weights(g);
    const auto c = g.curvature();
    EXPECT_EQ(K_boundary(g, w, c, 0.0).value, 0.0);
    EXPECT_EQ(K1_alt(g, w, c, 0.0).value, 0.0);
    const auto s = steklov_lower(g, w, c, 0.0);
    EXPECT_TRUE(s.vacuous);
    EXPECT_EQ(s.value, kInf);
    // K1 reduces to the prefactor times the smallest gradient integral.
    const auto k1 = K1_general(g, w, c, 0.0);
    EXPECT_EQ(k1.eps, kInf);
    const double lo = cutoff_upper_limit(c, 1.0) * 1e-3;
    const double expect = w.A / (w.B * w.B) * phi_tube_integrals(g, w, c, lo).grad_sq;
    EXPECT_NEAR(k1.value, expect, 1e-12 * expect + 1e-300);
}

TEST(Explicit, StekloveIdentityAndTraceRoute) {
    for (const auto& g : {BenchmarkGeometry::flat_disk(1.0), BenchmarkGeometry::spherical_cap(kPi / 2),
                          BenchmarkGeometry::hyperbolic_disk(1.0)}) {
        const auto w = normalize_weights(g, RadialProfile::from_expression("exp(-r^2)"), RadialProfile::constant(1.0));
        const auto c = g.curvature();
        const double C = 0.3;
        const auto kb = K_boundary(g, w, c, C);
        const auto s = steklov_lower(g, w, c, C);
        EXPECT_NEAR(s.value * kb.value, w.A / w.B, 1e-15 * w.A / w.B * 4);
        EXPECT_EQ(K1_alt(g, w, c, C).value, kb.value);
    }
}

TEST(Explicit, FlatDiskConstantWeights) {
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    const auto w = constant_weights(g);
    const auto c = g.curvature();
    const auto t = trace_norm_bound(g, w, c);
    EXPECT_NEAR(t.value, std::sqrt(3.0), 1e-8);
    EXPECT_GE(t.value * t.value, w.B / w.A);
    const auto s = steklov_lower(g, w, c, kDiskCla);
    EXPECT_LE(s.value, 1.0);
    EXPECT_NEAR(s.value, 1.0 / (kDiskCla * 2.0 + 2.0 * std::sqrt(kDiskCla)), 1e-8);
    const auto kb = K_boundary(g, w, c, kDiskCla);
    EXPECT_GE(kb.value, K_from_steklov(1.0, w.A, w.B));
}

TEST(Explicit, K1ClosedFormEpsilon) {
    const auto g = BenchmarkGeometry::spherical_cap(1.0);
    const auto w = constant_weights(g, 2.0);
    const auto c = g.curvature();
    const double C = 0.25;
    const auto k1 = K1_general(g, w, c, C);
    // eps* is the minimizer of (1 + eps) C D + (1 + 1/eps) G.
    auto at = [&](double eps) {
        return k1.prefactor * ((1 + eps) * C * k1.drift_sq_bound + (1 + 1 / eps) * k1.grad_sq);
    };
    EXPECT_NEAR(at(k1.eps), k1.value, 1e-12 * k1.value);
    EXPECT_LE(k1.value, at(k1.eps * 1.1));
    EXPECT_LE(k1.value, at(k1.eps / 1.1));
    EXPECT_LE(k1.value, k1.grid_value);
}

TEST(Explicit, K1NeedsMatchingDimension) {
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    auto c = g.curvature();
    c.d = 3;
    EXPECT_THROW(K1_general(g, constant_weights(g), c, 0.3), DomainError);
}

TEST(Explicit, GaussianWeightGivesFiniteK1) {
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    const auto w = normalize_weights(g, RadialProfile::from_expression("exp(-r^2)"), RadialProfile::constant(1.0));
    const auto k1 = K1_general(g, w, g.curvature(), 0.3);
    EXPECT_TRUE(std::isfinite(k1.value));
    EXPECT_GT(k1.value, 0.0);
}

TEST(ConstantWeightReduction, MatchesGeneralFormulas) {
    for (const auto& g : {BenchmarkGeometry::flat_disk(1.0), BenchmarkGeometry::spherical_cap(kPi / 2),
                          BenchmarkGeometry::spherical_cap(1.0), BenchmarkGeometry::hyperbolic_disk(1.0)}) {
        const auto c = g.curvature();
        const double C_la = 0.3, C_sib = 0.9;
        const auto hard = constant_weight::constants(g, c, C_la);
        for (double a : {0.2, 0.5, 0.8}) {
            const auto alpha = RadialProfile::constant(a / g.volume());
            const auto beta = RadialProfile::constant((1 - a) / g.boundary_length());
            const auto w = normalize_weights(g, alpha, beta);
            EXPECT_NEAR(w.beta_over_alpha_sup, (1 - a) * g.volume() / (a * g.boundary_length()), 1e-13);
            EXPECT_EQ(w.log_grad_beta_sup, 0.0);
            const double k1 = K1_general(g, w, c, C_la).value;
            const double kb = K_boundary(g, w, c, C_la).value;
            EXPECT_NEAR(k1, hard.K1, 1e-12 * hard.K1) << g.name() << " a=" << a;
            EXPECT_NEAR(kb, hard.K_boundary, 1e-12 * hard.K_boundary) << g.name() << " a=" << a;

            InterpolationInputs general{C_la, C_sib, 0, 0, k1, 0, kb, 0, w.A, w.B};
            InterpolationInputs reduced{C_la, C_sib, 0, 0, hard.K1, 0, hard.K_boundary, 0, a, 1 - a};
            const double pg = interpolate_poincare(general).value, pr = interpolate_poincare(reduced).value;
            EXPECT_NEAR(pg, pr, 1e-12 * pr);
            const double ng = poincare_no_bd(C_la, k1, kb, w.A, w.B);
            const double nr = poincare_no_bd(C_la, hard.K1, hard.K_boundary, a, 1 - a);
            EXPECT_NEAR(ng, nr, 1e-12 * nr);
        }
    }
}

TEST(Report, DiskConstantWeights) {
    BoundsProblem pb;
    pb.geometry = BenchmarkGeometry::flat_disk(1.0);
    pb.weights = constant_weights(pb.geometry);
    pb.curvature = pb.geometry.curvature();
    pb.C_la = kDiskCla;
    pb.C_sib = 1.0;
    pb.L_la = 0.6;
    pb.L_sib = 2.0;
    pb.L_boundary = 1.0;
    const auto rep = evaluate_bounds(pb);
    for (const char* key : {"C_mu_bound", "C_hat_bound", "sigma_lower", "trace_bound",
                            "K1", "K2", "K_boundary", "K1_general", "K1_alt", "L_mu_bound",
                            "L_hat_bound"})
        EXPECT_TRUE(rep.has(key)) << key;
    EXPECT_EQ(rep.value("K1"), std::min(rep.value("K1_general"), rep.value("K1_alt")));
    EXPECT_EQ(rep.value("K2"), 0.0);
    EXPECT_TRUE(rep.at("L_mu_bound").conditional);
    EXPECT_FALSE(rep.at("C_mu_bound").conditional);
    for (const auto& [key, e] : rep.entries) {
        EXPECT_TRUE(std::isfinite(e.value)) << key;
        EXPECT_GE(e.value, 0.0) << key;
    }
    // numeric C_mu of the disk exceeds 0.6 while the bound must dominate
    EXPECT_GT(rep.value("C_mu_bound"), 0.6);
    EXPECT_LE(rep.value("sigma_lower"), 1.0);
}

TEST(Report, CoincidingRequestNeedsPositiveCurvature) {
    BoundsProblem pb;
    pb.geometry = BenchmarkGeometry::spherical_cap(1.0);
    pb.weights = constant_weights(pb.geometry);
    pb.curvature = pb.geometry.curvature();
    pb.curvature.k_alpha_n = -1.0;
    pb.curvature.flags.beta_equals_alpha_on_boundary = true;
    pb.curvature.flags.H_alpha_integral_nonneg = true;
    pb.coinciding = true;
    pb.C_la = 0.3;
    pb.C_sib = 0.5;
    EXPECT_THROW(evaluate_bounds(pb), DomainError);
}

TEST(Report, FormulaOnlyHigherDimension) {
    BoundsProblem pb;
    pb.geometry = BenchmarkGeometry::spherical_cap(1.0);
    pb.weights = constant_weights(pb.geometry);
    pb.curvature = pb.geometry.curvature();
    pb.curvature.d = 3;
    pb.C_la = 0.3;
    pb.C_sib = 0.5;
    pb.L_la = 1.0;
    pb.L_sib = 1.0;
    pb.sobolev = [](double) { return 0.8; };
    const auto rep = evaluate_bounds(pb);
    EXPECT_FALSE(rep.has("K1_general"));
    EXPECT_TRUE(rep.skipped.count("K1_general"));
    EXPECT_TRUE(rep.has("L_boundary"));
    EXPECT_TRUE(rep.at("L_boundary").conditional);
    EXPECT_TRUE(rep.has("L_mu_bound"));
}
