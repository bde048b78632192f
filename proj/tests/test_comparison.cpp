#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sticky/comparison/comparison.hpp"

using namespace sticky;
using numerics::kInf;
using numerics::kPi;

namespace {

WeightPair constant_weights(const BenchmarkGeometry& g) {
    return normalize_weights(g, RadialProfile::constant(1.0), RadialProfile::constant(1.0));
}

}  // namespace

TEST(ComparisonFunction, ExamplesFromClosedForms) {
    EXPECT_EQ(h_eval(0.0, 0.0, 3.7), 1.0);
    EXPECT_NEAR(h_eval(1.0, 0.0, kPi / 2), 0.0, 1e-15);
    EXPECT_NEAR(h_eval(-1.0, 2.0, std::atanh(0.5)), 0.0, 1e-15);
}

TEST(ComparisonFunction, InitialValues) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> k(-5, 5), gamma(-3, 3);
    for (int i = 0; i < 200; ++i) {
        const double kk = k(rng), gg = gamma(rng);
        EXPECT_DOUBLE_EQ(h_eval(kk, gg, 0.0), 1.0);
        EXPECT_NEAR(h_derivative(kk, gg, 0.0), -gg, 1e-15);
    }
}

TEST(ComparisonFunction, DerivativeMatchesFiniteDifference) {
    for (double k : {-2.0, 0.0, 1.5})
        for (double gamma : {-1.0, 0.3, 2.0})
            for (double t : {0.1, 0.4, 0.7}) {
                const double step = 1e-6;
                const double fd = (h_eval(k, gamma, t + step) - h_eval(k, gamma, t - step)) / (2 * step);
                EXPECT_NEAR(h_derivative(k, gamma, t), fd, 1e-8);
            }
}

TEST(ComparisonFunction, ContinuousAcrossZeroCurvature) {
    // h(k) - h(0) = -k (t^2/2 - gamma t^3/6) + O(k^2).
    for (double k : {1e-8, -1e-8})
        for (double gamma = -2.0; gamma <= 2.0; gamma += 0.25)
            for (double t = 0.0; t <= 10.0; t += 0.5) {
                const double first_order = std::abs(k) * (t * t / 2 + std::abs(gamma) * t * t * t / 6);
                EXPECT_LE(std::abs(h_eval(k, gamma, t) - h_eval(0.0, gamma, t)), 1.01 * first_order + 1e-12)
                    << "k=" << k << " gamma=" << gamma << " t=" << t;
            }
}

TEST(FirstZero, Examples) {
    EXPECT_NEAR(h_first_zero(4.0, 0.0), kPi / 4, 1e-15);
    EXPECT_DOUBLE_EQ(h_first_zero(0.0, 2.0), 0.5);
    EXPECT_EQ(h_first_zero(-1.0, 0.5), kInf);
    EXPECT_EQ(h_first_zero(0.0, 0.0), kInf);
    EXPECT_EQ(h_first_zero(0.0, -1.0), kInf);
    EXPECT_NEAR(h_first_zero(1.0, -1.0), 3 * kPi / 4, 1e-15);
}

TEST(FirstZero, BenchmarksVanishAtTheCenter) {
    for (const auto& g : {BenchmarkGeometry::flat_disk(1.3), BenchmarkGeometry::spherical_cap(kPi / 2),
                          BenchmarkGeometry::spherical_cap(0.7), BenchmarkGeometry::hyperbolic_disk(1.0)}) {
        const auto c = g.curvature();
        EXPECT_NEAR(h_first_zero(c.k2, c.gamma2), g.inradius(), 1e-12) << g.name();
    }
}

TEST(FirstZero, MatchesBisection) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> k(-4, 4), gamma(-3, 3);
    for (int i = 0; i < 1000; ++i) {
        const double kk = k(rng), gg = gamma(rng);
        const double closed = h_first_zero(kk, gg);
        const double bisect = h_first_zero_bisection(kk, gg, 50.0);
        if (closed > 50.0)
            EXPECT_EQ(bisect, kInf);
        else
            EXPECT_NEAR(closed, bisect, 1e-10) << "k=" << kk << " gamma=" << gg;
    }
}

TEST(FirstZero, MonotoneInCurvatureData) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2), step(0, 1.5);
    for (int i = 0; i < 500; ++i) {
        const double k1 = u(rng), g1 = u(rng);
        const double k2 = k1 + step(rng), g2 = g1 + step(rng);
        EXPECT_LE(h_first_zero(k2, g2), h_first_zero(k1, g1) * (1 + 1e-14));
    }
}

TEST(LaplaceComparison, EqualityOnFlatDisk) {
    const auto c = BenchmarkGeometry::flat_disk(1.0).curvature();
    for (double rho = 0.0; rho < 0.999; rho += 0.01) {
        const auto b = laplace_comp_bounds(c, rho);
        EXPECT_NEAR(b.lower, -1.0 / (1.0 - rho), 1e-12);
        EXPECT_NEAR(b.upper, -1.0 / (1.0 - rho), 1e-12);
    }
}

TEST(LaplaceComparison, Examples) {
    CurvatureBounds c;
    c.k1 = c.k2 = 1.0;
    const auto at0 = laplace_comp_bounds(c, 0.0);
    EXPECT_EQ(at0.lower, 0.0);
    const auto hemi = laplace_comp_bounds(BenchmarkGeometry::spherical_cap(kPi / 2).curvature(), kPi / 4);
    EXPECT_NEAR(hemi.lower, -1.0, 1e-12);
    EXPECT_NEAR(hemi.upper, -1.0, 1e-12);
}

TEST(LaplaceComparison, OrderedAndRangeChecked) {
    CurvatureBounds c;
    c.d = 3;
    c.k1 = -0.5;
    c.k2 = 0.8;
    c.gamma1 = 0.1;
    c.gamma2 = 0.9;
    const double z = h_first_zero(c.k2, c.gamma2);
    for (double rho = 0.0; rho < z; rho += z / 50) {
        const auto b = laplace_comp_bounds(c, rho);
        EXPECT_LE(b.lower, b.upper);
    }
    EXPECT_THROW(laplace_comp_bounds(c, z), DomainError);
    EXPECT_THROW(laplace_comp_bounds(c, -0.1), DomainError);
}

TEST(TestFunction, ProfileShape) {
    const TestFunctionProfile psi{0.4};
    EXPECT_EQ(psi.gradient(0.0), 1.0);
    EXPECT_EQ(psi.normal_derivative(), -1.0);
    EXPECT_EQ(psi.gradient(0.5), 0.0);
    EXPECT_NEAR(psi.value(0.4), 0.2, 1e-15);
    EXPECT_NEAR(psi.value(1.0), 0.2, 1e-15);
    EXPECT_EQ(psi.laplacian_from(-3.0, 0.6), 0.0);
}

TEST(PhiTube, GradientIntegralClosedForm) {
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    const auto w = constant_weights(g);
    const auto c = g.curvature();
    // t0 just below the inradius: int (1 - rho/t0)^2 beta dlambda -> 1/6
    const double t0 = 1.0 - 1e-9;
    const double exact = 2.0 / 3.0 * (t0 / 3 - t0 * t0 / 12);
    EXPECT_NEAR(phi_tube_integrals(g, w, c, t0).grad_sq, exact, 1e-10);
    EXPECT_NEAR(exact, 1.0 / 6.0, 1e-9);
    EXPECT_NEAR(phi_tube_integrals(g, w, c, 0.5).grad_sq, 7.0 / 72.0, 1e-13);
}

TEST(PhiTube, DriftOracleOnFlatDisk) {
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    const auto w = constant_weights(g);
    const auto phi = phi_tube_integrals(g, w, g.curvature(), 0.5);
    // 2 pi beta int_0^{1/2} ((1-2 rho)/(1-rho) + 2)^2 (1-rho) drho, 30-digit quadrature
    EXPECT_NEAR(phi.drift_sq_bound, 1.79543145370663020627815474764, 1e-12);
}

TEST(PhiTube, RejectsCutoffBeyondFirstZero) {
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    const auto w = constant_weights(g);
    EXPECT_THROW(phi_tube_integrals(g, w, g.curvature(), 1.0), DomainError);
    EXPECT_THROW(phi_tube_integrals(g, w, g.curvature(), 0.0), DomainError);
}

TEST(PhiTube, WeightGradientTermsAddUp) {
    // With beta = e^{r}: |grad beta|/beta = 1 and the bound grows by
    // int (2 (neg + pos) + (1 - rho/t0)) (1 - rho/t0) beta dlambda.
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    const auto w = normalize_weights(g, RadialProfile::constant(1.0), RadialProfile::from_expression("exp(r)"));
    const auto c = g.curvature();
    const double t0 = 0.6;
    const auto phi = phi_tube_integrals(g, w, c, t0);
    const double extra = tube_integral(
        g, w, t0,
        [&](double rho) {
            const double damp = 1 - rho / t0;
            const double neg = damp / (1 - rho) + 1 / t0;
            return 2 * neg * damp + damp * damp;
        },
        30, 16);
    const double base = tube_integral(
        g, w, t0,
        [&](double rho) {
            const double neg = (1 - rho / t0) / (1 - rho) + 1 / t0;
            return neg * neg;
        },
        30, 16);
    EXPECT_NEAR(phi.drift_sq_bound, base + extra, 1e-11);
}

TEST(Negpart, FlatDiskValueAtHalf) {
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    EXPECT_NEAR(rho_negpart_sup(g, constant_weights(g), g.curvature(), 0.5), 3.0, 1e-12);
}

TEST(Negpart, BlowsUpAsCutoffShrinks) {
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    const auto w = constant_weights(g);
    double prev = 0.0;
    for (double t1 = 0.5; t1 > 1e-4; t1 /= 2) {
        const double v = rho_negpart_sup(g, w, g.curvature(), t1);
        EXPECT_NEAR(v, 1 + 1 / t1, 1e-9 * v);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(Negpart, FlatDiskInfimum) {
    const auto g = BenchmarkGeometry::flat_disk(1.0);
    const auto opt = optimize_rho_negpart(g, constant_weights(g), g.curvature());
    EXPECT_NEAR(opt.value, 2.0, 1e-8);
    EXPECT_LE(opt.value, opt.grid_value);
    EXPECT_EQ(opt.grid_size, 64);
}

TEST(Negpart, HemisphereFiniteMinimizer) {
    const auto g = BenchmarkGeometry::spherical_cap(kPi / 2);
    const auto opt = optimize_rho_negpart(g, constant_weights(g), g.curvature());
    // dense-grid plus golden-section oracle
    EXPECT_NEAR(opt.value, 1.16233983278487820, 1e-8);
    EXPECT_NEAR(opt.t1, 1.354728773738811, 1e-4);
}

TEST(Negpart, InvariantUnderBetaScaling) {
    const auto g = BenchmarkGeometry::hyperbolic_disk(1.0);
    const auto w = normalize_weights(g, RadialProfile::from_expression("exp(-r^2)"),
                                     RadialProfile::from_expression("2 + r^2"));
    WeightPair scaled = w;
    scaled.beta = w.beta.scaled(7.5);
    for (double t1 : {0.2, 0.5, 0.9})
        EXPECT_EQ(rho_negpart_sup(g, w, g.curvature(), t1), rho_negpart_sup(g, scaled, g.curvature(), t1));
}
