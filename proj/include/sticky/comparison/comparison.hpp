#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "sticky/error.hpp"
#include "sticky/geometry/benchmark.hpp"
#include "sticky/geometry/curvature.hpp"
#include "sticky/geometry/weights.hpp"
#include "sticky/numerics.hpp"

namespace sticky {

/// h(t) = cos(sqrt(k) t) - gamma/sqrt(k) sin(sqrt(k) t) for k > 0, the
/// hyperbolic analogue for k < 0 and the limit 1 - gamma t at k = 0.
inline double h_eval(double k, double gamma, double t) {
    if (k > 0.0) {
        const double s = std::sqrt(k);
        return std::cos(s * t) - gamma / s * std::sin(s * t);
    }
    if (k < 0.0) {
        const double s = std::sqrt(-k);
        return std::cosh(s * t) - gamma / s * std::sinh(s * t);
    }
    return 1.0 - gamma * t;
}

inline double h_derivative(double k, double gamma, double t) {
    if (k > 0.0) {
        const double s = std::sqrt(k);
        return -s * std::sin(s * t) - gamma * std::cos(s * t);
    }
    if (k < 0.0) {
        const double s = std::sqrt(-k);
        return s * std::sinh(s * t) - gamma * std::cosh(s * t);
    }
    return -gamma;
}

inline double h_log_derivative(double k, double gamma, double t) {
    return h_derivative(k, gamma, t) / h_eval(k, gamma, t);
}

/// Smallest t > 0 with h(t) = 0, or +inf when h stays positive.
inline double h_first_zero(double k, double gamma) {
    if (k > 0.0) {
        const double s = std::sqrt(k);
        return std::atan2(s, gamma) / s;
    }
    if (k < 0.0) {
        const double s = std::sqrt(-k);
        if (gamma > s) return std::atanh(s / gamma) / s;
        return numerics::kInf;
    }
    return gamma > 0.0 ? 1.0 / gamma : numerics::kInf;
}

/// First zero located by a sign-change scan of [0, horizon] and bisection.
/// Returns +inf when h has no sign change in the scanned range.
inline double h_first_zero_bisection(double k, double gamma, double horizon = 50.0, double tol = 1e-15) {
    const double freq = std::sqrt(std::abs(k)) + std::abs(gamma);
    const double step = std::min(1e-3, 0.05 / std::max(freq, 1e-12));
    double lo = 0.0;
    while (lo < horizon) {
        const double hi = std::min(horizon, lo + step);
        const double f_hi = h_eval(k, gamma, hi);
        if (f_hi <= 0.0) {
            if (f_hi == 0.0) return hi;
            double a = lo, b = hi;
            while (b - a > tol * std::max(1.0, b)) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                (h_eval(k, gamma, m) > 0.0 ? a : b) = m;
            }
            return 0.5 * (a + b);
        }
        lo = hi;
    }
    return numerics::kInf;
}

/// Comparison profile for one pair (k, gamma), with its first zero cached.
class ComparisonProfile {
public:
    ComparisonProfile(double k, double gamma) : k_(k), gamma_(gamma), zero_(h_first_zero(k, gamma)) {}

    double k() const { return k_; }
    double gamma() const { return gamma_; }
    double first_zero() const { return zero_; }

    double operator()(double t) const { return h_eval(k_, gamma_, t); }
    double derivative(double t) const { return h_derivative(k_, gamma_, t); }
    double log_derivative(double t) const { return h_log_derivative(k_, gamma_, t); }

private:
    double k_;
    double gamma_;
    double zero_;
};

struct LaplaceBounds {
    double lower;
    double upper;
};

/// Bounds on the Laplacian of the boundary distance at depth rho:
/// (d-1) h2'/h2(rho) <= Delta rho_bd <= (d-1) h1'/h1(rho).
inline LaplaceBounds laplace_comp_bounds(const CurvatureBounds& curv, double rho) {
    require(rho >= 0.0, "depth must be nonnegative");
    const ComparisonProfile h1(curv.k1, curv.gamma1), h2(curv.k2, curv.gamma2);
    if (!(rho < h2.first_zero()) || !(rho < h1.first_zero())) {
        std::ostringstream msg;
        msg << "depth " << rho << " is outside the comparison range (first zeros " << h2.first_zero() << ", "
            << h1.first_zero() << ")";
        throw DomainError(msg.str());
    }
    const double dm1 = curv.d - 1;
    return {dm1 * h2.log_derivative(rho), dm1 * h1.log_derivative(rho)};
}

/// Radial test function psi(rho_bd) = int_0^rho (1 - s/t_cut)^+ ds.
struct TestFunctionProfile {
    double t_cut;

    double value(double rho) const {
        const double r = std::min(rho, t_cut);
        return r - 0.5 * r * r / t_cut;
    }
    /// |grad psi| = (1 - rho/t_cut)^+; the normal derivative at rho = 0 is -1.
    double gradient(double rho) const { return std::max(0.0, 1.0 - rho / t_cut); }
    double normal_derivative() const { return -1.0; }
    /// Bounds on Delta psi from a bound L on Delta rho_bd: L (1 - rho/t) - 1/t.
    double laplacian_from(double laplace_rho, double rho) const {
        if (rho > t_cut) return 0.0;
        return laplace_rho * gradient(rho) - 1.0 / t_cut;
    }
};

/// Usable upper end of the cutoff range (0, first zero of h2), capped for
/// profiles that never vanish.
inline double cutoff_upper_limit(const CurvatureBounds& curv, double inradius) {
    const double z = h_first_zero(curv.k2, curv.gamma2);
    if (std::isinf(z)) return 1e3 * inradius;
    return z * (1.0 - 1e-9);
}

namespace detail {

/// Interior sign changes of f on (lo, hi), by a uniform scan and bisection.
template <class F>
std::vector<double> sign_changes(F&& f, double lo, double hi, int samples = 256) {
    std::vector<double> roots;
    double a = lo, fa = f(lo);
    for (int i = 1; i <= samples; ++i) {
        const double b = lo + (hi - lo) * i / samples;
        const double fb = f(b);
        if ((fa < 0.0) != (fb < 0.0)) {
            double x0 = a, x1 = b;
            const bool neg0 = fa < 0.0;
            for (int it = 0; it < 200 && x1 - x0 > 1e-15 * std::max(1.0, x1); ++it) {
                const double m = 0.5 * (x0 + x1);
                ((f(m) < 0.0) == neg0 ? x0 : x1) = m;
            }
            roots.push_back(0.5 * (x0 + x1));
        }
        a = b;
        fa = fb;
    }
    return roots;
}

}  // namespace detail

/// Squared L2(beta lambda) norms of the gradient and of the weighted drift bound
/// for the tube test function with cutoff t0.
struct PhiIntegrals {
    double t0 = 0.0;
    double grad_sq = 0.0;
    double drift_sq_bound = 0.0;
};

inline constexpr int kTubeOrder = 20;
inline constexpr int kTubePanels = 8;

inline PhiIntegrals phi_tube_integrals(const BenchmarkGeometry& g, const WeightPair& w, const CurvatureBounds& curv,
                                       double t0) {
    const ComparisonProfile h1(curv.k1, curv.gamma1), h2(curv.k2, curv.gamma2);
    if (!(t0 > 0.0) || !(t0 < h2.first_zero())) {
        std::ostringstream msg;
        msg << "cutoff t0 = " << t0 << " must lie in (0, " << h2.first_zero() << ")";
        throw DomainError(msg.str());
    }
    const double dm1 = curv.d - 1;
    const double top = std::min(t0, g.inradius());
    // (1 - rho/t0) times the comparison term minus 1/(t0 - rho), which is bounded.
    auto lower = [&](double rho) { return dm1 * h2.log_derivative(rho) * (1.0 - rho / t0) - 1.0 / t0; };
    auto upper = [&](double rho) { return dm1 * h1.log_derivative(rho) * (1.0 - rho / t0) - 1.0 / t0; };

    std::vector<double> kinks = detail::sign_changes(lower, 0.0, top);
    const auto more = detail::sign_changes(upper, 0.0, top);
    kinks.insert(kinks.end(), more.begin(), more.end());

    auto drift = [&](double rho) {
        const double damp = 1.0 - rho / t0;
        const double neg = std::max(0.0, -lower(rho));
        const double pos = std::max(0.0, upper(rho));
        const double lg = w.log_grad_beta_at_depth(rho);
        return neg * neg + pos * pos + 2.0 * (neg + pos) * lg * damp + lg * lg * damp * damp;
    };
    PhiIntegrals out;
    out.t0 = t0;
    out.grad_sq = tube_integral(
        g, w, t0, [&](double rho) { return (1.0 - rho / t0) * (1.0 - rho / t0); }, kTubeOrder, kTubePanels);
    out.drift_sq_bound = tube_integral(g, w, t0, drift, kTubeOrder, kTubePanels, kinks);
    return out;
}

/// sup over {rho_bd <= t1} of (1 - rho/t1)((d-1) h2'/h2(rho) - 1/(t1 - rho) - |grad beta|/beta)^-.
inline double rho_negpart_sup(const BenchmarkGeometry& g, const WeightPair& w, const CurvatureBounds& curv,
                              double t1) {
    const ComparisonProfile h2(curv.k2, curv.gamma2);
    if (!(t1 > 0.0) || !(t1 < h2.first_zero())) {
        std::ostringstream msg;
        msg << "cutoff t1 = " << t1 << " must lie in (0, " << h2.first_zero() << ")";
        throw DomainError(msg.str());
    }
    const double dm1 = curv.d - 1;
    const double top = std::min(t1, g.inradius());
    auto negpart = [&](double rho) {
        const double damp = 1.0 - rho / t1;
        const double v = dm1 * h2.log_derivative(rho) * damp - 1.0 / t1 - w.log_grad_beta_at_depth(rho) * damp;
        return std::max(0.0, -v);
    };
    return numerics::scan_sup(negpart, 0.0, top, 4001).value;
}

struct NegpartOptimum {
    double t1 = 0.0;
    double value = 0.0;
    double grid_t1 = 0.0;
    double grid_value = 0.0;
    int grid_size = 0;
    double grid_ratio = 0.0;
};

inline constexpr int kCutoffGridSize = 64;

/// Infimum over t1 of rho_negpart_sup on a log grid over (0, first zero), then polished.
inline NegpartOptimum optimize_rho_negpart(const BenchmarkGeometry& g, const WeightPair& w,
                                           const CurvatureBounds& curv, int grid_size = kCutoffGridSize) {
    const double hi = cutoff_upper_limit(curv, g.inradius());
    require(hi > 0.0, "empty cutoff range");
    const auto search =
        numerics::minimize_on_log_grid([&](double t1) { return rho_negpart_sup(g, w, curv, t1); }, hi * 1e-3, hi,
                                       grid_size);
    return {search.x, search.value, search.grid_x, search.grid_value, search.grid_size, search.grid_ratio};
}

}  // namespace sticky
