#pragma once

#include <cmath>
#include <limits>

#include "sticky/comparison/comparison.hpp"
#include "sticky/error.hpp"
#include "sticky/geometry/benchmark.hpp"
#include "sticky/geometry/curvature.hpp"
#include "sticky/geometry/weights.hpp"
#include "sticky/numerics.hpp"

namespace sticky {

struct K1Result {
    double value = 0.0;
    double t0 = 0.0;
    double eps = 0.0;  ///< +inf when C_la = 0
    double grad_sq = 0.0;
    double drift_sq_bound = 0.0;
    double prefactor = 0.0;  ///< (A/B^2) |beta/alpha|_inf
    double grid_value = 0.0;
    int grid_size = 0;
    double grid_ratio = 0.0;
};

namespace detail {

/// min over eps > 0 of (1 + eps) C D + (1 + 1/eps) G = (sqrt(C D) + sqrt(G))^2.
inline double eps_optimum(double C, double D, double G) {
    const double r = std::sqrt(C * D) + std::sqrt(G);
    return r * r;
}

inline void require_tube_dimension(const BenchmarkGeometry& g, const CurvatureBounds& curv) {
    if (curv.d != g.dimension())
        throw DomainError("tube integrals need curvature data in the dimension of the geometry (d = " +
                          std::to_string(g.dimension()) + ")");
}

}  // namespace detail

/// Mixed-term constant from the tube test function, minimized over the cutoff
/// t0 with the optimal eps in closed form.
inline K1Result K1_general(const BenchmarkGeometry& g, const WeightPair& w, const CurvatureBounds& curv, double C_la,
                           int grid_size = kCutoffGridSize) {
    require(C_la >= 0.0 && std::isfinite(C_la), "C_la must be finite and nonnegative");
    curv.validate();
    detail::require_tube_dimension(g, curv);
    const double hi = cutoff_upper_limit(curv, g.inradius());
    auto objective = [&](double t0) {
        const auto phi = phi_tube_integrals(g, w, curv, t0);
        return detail::eps_optimum(C_la, phi.drift_sq_bound, phi.grad_sq);
    };
    const auto search = numerics::minimize_on_log_grid(objective, hi * 1e-3, hi, grid_size);
    const auto phi = phi_tube_integrals(g, w, curv, search.x);

    K1Result out;
    out.prefactor = w.A / (w.B * w.B) * w.beta_over_alpha_sup;
    out.value = out.prefactor * search.value;
    out.t0 = search.x;
    out.grad_sq = phi.grad_sq;
    out.drift_sq_bound = phi.drift_sq_bound;
    out.eps = (C_la * phi.drift_sq_bound > 0.0) ? std::sqrt(phi.grad_sq / (C_la * phi.drift_sq_bound))
                                                : numerics::kInf;
    out.grid_value = out.prefactor * search.grid_value;
    out.grid_size = search.grid_size;
    out.grid_ratio = search.grid_ratio;
    return out;
}

struct BoundaryResult {
    double value = 0.0;
    double negpart = 0.0;
    NegpartOptimum optimum;
};

/// (A/B) |beta/alpha|_inf (C_la negpart + 2 sqrt(C_la)), with |grad rho|_inf <= 1.
inline double boundary_formula(double A, double B, double ratio_sup, double C_la, double negpart) {
    return A / B * ratio_sup * (C_la * negpart + 2.0 * std::sqrt(C_la));
}

/// Constant in Var_sigma_beta(f) <= K int |grad f|^2 dlambda_alpha.
inline BoundaryResult K_boundary(const BenchmarkGeometry& g, const WeightPair& w, const CurvatureBounds& curv,
                                 double C_la) {
    require(C_la >= 0.0 && std::isfinite(C_la), "C_la must be finite and nonnegative");
    curv.validate();
    BoundaryResult out;
    out.optimum = optimize_rho_negpart(g, w, curv);
    out.negpart = out.optimum.value;
    out.value = boundary_formula(w.A, w.B, w.beta_over_alpha_sup, C_la, out.negpart);
    return out;
}

/// Alternative mixed-term constant; the formula coincides with K_boundary.
inline BoundaryResult K1_alt(const BenchmarkGeometry& g, const WeightPair& w, const CurvatureBounds& curv,
                             double C_la) {
    return K_boundary(g, w, curv, C_la);
}

struct SteklovLower {
    double value = 0.0;
    bool vacuous = false;
    double negpart = 0.0;
};

/// Lower bound on the first nontrivial doubly weighted Steklov eigenvalue.
inline SteklovLower steklov_lower(const BenchmarkGeometry& g, const WeightPair& w, const CurvatureBounds& curv,
                                  double C_la) {
    require(C_la >= 0.0 && std::isfinite(C_la), "C_la must be finite and nonnegative");
    curv.validate();
    SteklovLower out;
    out.negpart = optimize_rho_negpart(g, w, curv).value;
    const double denom = w.beta_over_alpha_sup * (C_la * out.negpart + 2.0 * std::sqrt(C_la));
    if (denom == 0.0) {
        out.value = numerics::kInf;
        out.vacuous = true;
    } else {
        out.value = 1.0 / denom;
    }
    return out;
}

/// K_boundary = (A/B)/sigma for the optimal constant.
inline double K_from_steklov(double sigma, double A, double B) {
    require(sigma > 0.0 && std::isfinite(sigma), "Steklov eigenvalue must be positive");
    require(A > 0.0 && B > 0.0, "masses must be positive");
    return A / B / sigma;
}

struct TraceBound {
    double value = 0.0;
    double negpart = 0.0;
};

/// Upper bound on the norm of the trace map W^{1,2}(alpha dlambda) -> L^2(beta dsigma).
inline TraceBound trace_norm_bound(const BenchmarkGeometry& g, const WeightPair& w, const CurvatureBounds& curv) {
    curv.validate();
    TraceBound out;
    out.negpart = optimize_rho_negpart(g, w, curv).value;
    out.value = std::sqrt(w.beta_over_alpha_sup * (out.negpart + 1.0));
    return out;
}

}  // namespace sticky
