#pragma once

#include <cmath>
#include <functional>
#include <sstream>

#include "sticky/bounds/explicit.hpp"
#include "sticky/error.hpp"
#include "sticky/geometry/weights.hpp"
#include "sticky/numerics.hpp"

namespace sticky {

/// (|beta|_inf / B)^{1/p} (|A/alpha|_inf)^{1/q} C_pq.
inline double weighted_sobolev_const(double p, double q, double C_pq, double beta_sup_over_B,
                                     double A_over_alpha_sup) {
    require(p >= 1.0 && q >= 1.0, "Sobolev exponents must be at least 1");
    require(C_pq >= 0.0 && std::isfinite(C_pq), "Sobolev constant must be finite and nonnegative");
    return std::pow(beta_sup_over_B, 1.0 / p) * std::pow(A_over_alpha_sup, 1.0 / q) * C_pq;
}

inline double weighted_sobolev_const(double p, double q, double C_pq, const WeightPair& w) {
    return weighted_sobolev_const(p, q, C_pq, w.beta_sup / w.B, w.A_over_alpha_sup);
}

/// Largest admissible exponent (2d - 2)/(d - 2) for the boundary-interior inequality.
inline double max_trace_exponent(int d) {
    require(d >= 3, "boundary-interior Sobolev inequality needs d >= 3");
    return (2.0 * d - 2.0) / (d - 2.0);
}

/// Boundary-interior Sobolev constant from the weighted constants
/// C^{beta,alpha}_{2(p-1),2} and C^{beta,alpha}_{p,2}.
inline double boundary_interior_sobolev(double p, int d, double grad_rho_sup, double ratio_sup, double A, double B,
                                        double C_2pm2, double C_p2, double negpart) {
    const double pmax = max_trace_exponent(d);
    if (!(p >= 2.0 && p <= pmax * (1.0 + 1e-12))) {
        std::ostringstream msg;
        msg << "exponent p = " << p << " outside [2, " << pmax << "]";
        throw DomainError(msg.str());
    }
    require(C_2pm2 >= 0.0 && C_p2 >= 0.0 && negpart >= 0.0, "Sobolev inputs must be nonnegative");
    const double lead = (p * grad_rho_sup) * (p * grad_rho_sup) * ratio_sup * (A / B) * std::pow(C_2pm2, 2.0 * (p - 1.0));
    return std::pow(lead, 1.0 / p) + std::pow(negpart, 2.0 / p) * C_p2 * C_p2;
}

/// p/(p-2) * C_tilde / e.
inline double entropy_from_trace(double p, int d, double C_tilde) {
    const double pmax = max_trace_exponent(d);
    if (!(p > 2.0 && p <= pmax * (1.0 + 1e-12))) {
        std::ostringstream msg;
        msg << "exponent p = " << p << " outside (2, " << pmax << "]";
        throw DomainError(msg.str());
    }
    return p / (p - 2.0) * C_tilde / std::exp(1.0);
}

/// Unweighted Sobolev-Poincare constant C_{exponent,2} of the manifold, as a
/// function of the exponent. Supplied by the caller.
using SobolevTable = std::function<double(double exponent)>;

struct BoundaryEntropy {
    double value = 0.0;
    double p = 0.0;
    double entropy_term = 0.0;
    double rothaus_term = 0.0;
    double negpart = 0.0;
    int grid_size = 0;
};

inline constexpr int kExponentGridSize = 128;

/// L_{bd,Omega} = inf_p p/(p-2) C_tilde(p)/e + (2A/B)|beta/alpha|_inf (C_la negpart + 2 sqrt(C_la)).
inline BoundaryEntropy L_boundary_interior(int d, double negpart, const WeightPair& w, double C_la,
                                           const SobolevTable& table, int grid_size = kExponentGridSize) {
    require(C_la >= 0.0 && std::isfinite(C_la), "C_la must be finite and nonnegative");
    const double pmax = max_trace_exponent(d);
    const double plo = 2.0 + 1e-3;
    auto term = [&](double p) {
        const double c1 = weighted_sobolev_const(2.0 * (p - 1.0), 2.0, table(2.0 * (p - 1.0)), w);
        const double c2 = weighted_sobolev_const(p, 2.0, table(p), w);
        const double ct = boundary_interior_sobolev(p, d, 1.0, w.beta_over_alpha_sup, w.A, w.B, c1, c2, negpart);
        return entropy_from_trace(p, d, ct);
    };
    double best_p = pmax, best = term(pmax);
    int best_i = grid_size - 1;
    for (int i = 0; i < grid_size; ++i) {
        const double p = plo + (pmax - plo) * i / (grid_size - 1);
        const double v = term(p);
        if (v < best) {
            best = v;
            best_p = p;
            best_i = i;
        }
    }
    const double step = (pmax - plo) / (grid_size - 1);
    const double a = std::max(plo, plo + (best_i - 1) * step), b = std::min(pmax, plo + (best_i + 1) * step);
    const auto polished = numerics::minimize_bracketed(term, a, b);
    if (polished.value < best) {
        best = polished.value;
        best_p = polished.x;
    }
    BoundaryEntropy out;
    out.p = best_p;
    out.entropy_term = best;
    out.negpart = negpart;
    out.rothaus_term = 2.0 * boundary_formula(w.A, w.B, w.beta_over_alpha_sup, C_la, negpart);
    out.value = out.entropy_term + out.rothaus_term;
    out.grid_size = grid_size;
    return out;
}

inline BoundaryEntropy L_boundary_interior(const BenchmarkGeometry& g, const WeightPair& w,
                                           const CurvatureBounds& curv, double C_la, const SobolevTable& table) {
    curv.validate();
    const double negpart = optimize_rho_negpart(g, w, curv).value;
    return L_boundary_interior(curv.d, negpart, w, C_la, table);
}

}  // namespace sticky
