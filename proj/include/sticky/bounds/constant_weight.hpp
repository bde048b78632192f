#pragma once

// Constants for the constant-weight case alpha = a/|Omega|, beta = (1-a)/|dOmega|.
// No weight gradients appear and every weight factor is folded into
// |Omega| and |dOmega|, so this path shares no weight handling with the
// general formulas.

#include <algorithm>
#include <cmath>

#include "sticky/comparison/comparison.hpp"
#include "sticky/error.hpp"
#include "sticky/geometry/benchmark.hpp"
#include "sticky/geometry/curvature.hpp"
#include "sticky/numerics.hpp"

namespace sticky::constant_weight {

struct Constants {
    double K1 = 0.0;
    double K_boundary = 0.0;
    double negpart = 0.0;
    double t0 = 0.0;
    double t1 = 0.0;
};

/// Unweighted tube integrals of the cutoff test function: (drift, gradient).
inline std::pair<double, double> tube_terms(const BenchmarkGeometry& g, const CurvatureBounds& curv, double t0) {
    const double r0 = g.inradius();
    const double top = std::min(t0, r0);
    const double dm1 = curv.d - 1;
    auto x2 = [&](double rho) { return dm1 * h_log_derivative(curv.k2, curv.gamma2, rho) * (1.0 - rho / t0) - 1.0 / t0; };
    auto x1 = [&](double rho) { return dm1 * h_log_derivative(curv.k1, curv.gamma1, rho) * (1.0 - rho / t0) - 1.0 / t0; };
    std::vector<double> cuts = detail::sign_changes(x2, 0.0, top);
    const auto more = detail::sign_changes(x1, 0.0, top);
    cuts.insert(cuts.end(), more.begin(), more.end());
    auto area = [&](double rho) { return 2.0 * numerics::kPi * g.jacobian(r0 - rho); };
    const double drift = numerics::integrate(
        [&](double rho) {
            const double n = std::min(0.0, x2(rho));
            const double p = std::max(0.0, x1(rho));
            return (n * n + p * p) * area(rho);
        },
        0.0, top, kTubeOrder, kTubePanels, cuts);
    const double grad = numerics::integrate(
        [&](double rho) { return (1.0 - rho / t0) * (1.0 - rho / t0) * area(rho); }, 0.0, top, kTubeOrder,
        kTubePanels);
    return {drift, grad};
}

inline double negpart_at(const BenchmarkGeometry& g, const CurvatureBounds& curv, double t1) {
    const double dm1 = curv.d - 1;
    auto f = [&](double rho) {
        return std::max(0.0, 1.0 / t1 - dm1 * h_log_derivative(curv.k2, curv.gamma2, rho) * (1.0 - rho / t1));
    };
    return numerics::scan_sup(f, 0.0, std::min(t1, g.inradius()), 4001).value;
}

/// K1 and K_boundary for constant weights; independent of the split a.
inline Constants constants(const BenchmarkGeometry& g, const CurvatureBounds& curv, double C_la) {
    require(C_la >= 0.0, "C_la must be nonnegative");
    const double vol = g.volume(), len = g.boundary_length();
    const double hi = cutoff_upper_limit(curv, g.inradius());
    Constants out;
    const auto k1 = numerics::minimize_on_log_grid(
        [&](double t0) {
            const auto [drift, grad] = tube_terms(g, curv, t0);
            const double r = std::sqrt(C_la * drift) + std::sqrt(grad);
            return r * r;
        },
        hi * 1e-3, hi, kCutoffGridSize);
    out.K1 = vol / (len * len) * k1.value;
    out.t0 = k1.x;
    const auto kb = numerics::minimize_on_log_grid([&](double t1) { return negpart_at(g, curv, t1); }, hi * 1e-3, hi,
                                                   kCutoffGridSize);
    out.negpart = kb.value;
    out.t1 = kb.x;
    out.K_boundary = vol / len * (C_la * out.negpart + 2.0 * std::sqrt(C_la));
    return out;
}

}  // namespace sticky::constant_weight
