#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "sticky/error.hpp"

namespace sticky {

struct InfMax {
    double t = 0.0;
    double value = 0.0;
};

namespace detail {

/// inf over t in [0, 1] of max(a + b t, c - d t) for b, d >= 0.
inline InfMax inf_max_nonneg(double a, double b, double c, double d) {
    const double gap = c - a;
    if (gap <= 0.0) return {0.0, a};
    if (gap >= b + d) return {1.0, c - d};
    const double t = gap / (b + d);
    return {t, (b * c + a * d) / (b + d)};
}

}  // namespace detail

/// inf over t in [0, 1] of max(a + b t, c - d t), closed form.
inline InfMax inf_max_affine(double a, double b, double c, double d) {
    require(b > 0.0 && d > 0.0, "inf-max needs positive slopes b and d");
    require(a >= 0.0 && c >= 0.0, "inf-max needs nonnegative offsets a and c");
    return detail::inf_max_nonneg(a, b, c, d);
}

/// Constants entering the interpolation formulas. Measures are normalized, A + B = 1.
struct InterpolationInputs {
    double C_la = 0.0;
    double C_sib = 0.0;
    double L_la = 0.0;
    double L_sib = 0.0;
    double K1 = 0.0;
    double K2 = 0.0;
    double K_boundary = 0.0;
    double L_boundary = 0.0;
    double A = 0.5;
    double B = 0.5;

    void validate() const {
        for (double v : {C_la, C_sib, L_la, L_sib, K1, K2, K_boundary, L_boundary})
            require(v >= 0.0 && std::isfinite(v), "interpolation constants must be finite and nonnegative");
        require(A > 0.0 && A < 1.0 && B > 0.0 && B < 1.0, "masses A and B must lie in (0, 1)");
        require(std::abs(A + B - 1.0) <= 1e-9, "masses must satisfy A + B = 1");
    }
};

struct PoincareInterpolation {
    double value = 0.0;
    double t = 0.0;
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

/// Upper bound on the Poincare constant of the sticky form by interpolating
/// the boundary variance between C_sib and K_boundary.
inline PoincareInterpolation interpolate_poincare(const InterpolationInputs& in) {
    in.validate();
    PoincareInterpolation out;
    out.a = in.C_la + in.B * in.K1;
    out.b = in.B / in.A * in.K_boundary;
    out.c = in.C_sib + in.A * in.K2;
    out.d = in.C_sib;
    const InfMax r = detail::inf_max_nonneg(out.a, out.b, out.c, out.d);
    out.value = r.value;
    out.t = r.t;
    return out;
}

/// The same bound written as a maximum of three expressions; the third is
/// dropped when its denominator vanishes.
inline double poincare_max_form(const InterpolationInputs& in) {
    const double a = in.C_la + in.B * in.K1;
    const double kb = in.B / in.A * in.K_boundary;
    double value = std::max(a, in.A * in.K2);
    if (kb + in.C_sib > 0.0) value = std::max(value, (kb * (in.C_sib + in.A * in.K2) + a * in.C_sib) / (kb + in.C_sib));
    return value;
}

/// Upper bound on the Poincare constant without boundary diffusion.
inline double poincare_no_bd(double C_la, double K1, double K_boundary, double A, double B) {
    require(C_la >= 0.0 && K1 >= 0.0 && K_boundary >= 0.0, "constants must be nonnegative");
    require(A > 0.0 && A < 1.0 && B > 0.0 && B < 1.0, "masses A and B must lie in (0, 1)");
    return C_la + B * K_boundary / A + B * K1;
}

/// (log B - log A)/(B - A): the optimal log-Sobolev constant of the Bernoulli
/// measure with weights A, B, with limit 2/(A + B) on the diagonal.
inline double bernoulli_logfactor(double A, double B) {
    require(A > 0.0 && A < 1.0 && B > 0.0 && B < 1.0, "masses A and B must lie in (0, 1)");
    if (std::abs(B - A) < 1e-9) return 2.0 / (A + B);
    return (std::log(B) - std::log(A)) / (B - A);
}

struct LogSobInterpolation {
    double value = 0.0;
    double s = 0.0;
    double t = 0.0;
    double logfactor = 0.0;
};

namespace detail {

struct LogSobLines {
    double a, b, c, d;
};

/// For fixed t, the two sides as affine functions of s: max(a + b s, c - d s).
inline LogSobLines logsob_lines(const InterpolationInputs& in, double lf, double t) {
    return {in.L_la + in.B * lf * (in.C_la + t * in.K_boundary + in.K1), in.L_boundary * in.B / in.A,
            in.L_sib + in.A * lf * ((1.0 - t) * in.C_sib + in.K2), in.L_sib};
}

}  // namespace detail

/// inf over (s, t) in [0, 1]^2 of max(F1, F2). For fixed t the inner problem is
/// a closed-form inf-max in s; the outer function of t is convex and piecewise
/// affine, so its minimum sits at t in {0, 1} or at a breakpoint of the inner case split.
inline LogSobInterpolation interpolate_logsob(const InterpolationInputs& in) {
    in.validate();
    const double lf = bernoulli_logfactor(in.A, in.B);
    auto inner = [&](double t) {
        const auto l = detail::logsob_lines(in, lf, t);
        return detail::inf_max_nonneg(l.a, l.b, l.c, l.d);
    };
    // gap(t) = c(t) - a(t) = g0 + g1 t
    const auto l0 = detail::logsob_lines(in, lf, 0.0);
    const auto l1 = detail::logsob_lines(in, lf, 1.0);
    const double g0 = l0.c - l0.a;
    const double g1 = (l1.c - l1.a) - g0;
    std::vector<double> candidates{0.0, 1.0};
    if (g1 != 0.0) {
        for (double level : {0.0, l0.b + l0.d}) {
            const double t = (level - g0) / g1;
            if (t > 0.0 && t < 1.0) candidates.push_back(t);
        }
    }
    LogSobInterpolation best;
    best.value = std::numeric_limits<double>::infinity();
    best.logfactor = lf;
    for (double t : candidates) {
        const InfMax r = inner(t);
        if (r.value < best.value) {
            best.value = r.value;
            best.s = r.t;
            best.t = t;
        }
    }
    return best;
}

/// Direct evaluation of max(F1, F2) at one point (s, t).
inline double logsob_objective(const InterpolationInputs& in, double s, double t) {
    const double lf = bernoulli_logfactor(in.A, in.B);
    const auto l = detail::logsob_lines(in, lf, t);
    return std::max(l.a + l.b * s, l.c - l.d * s);
}

/// Upper bound on the log-Sobolev constant without boundary diffusion.
inline double logsob_no_bd(double L_la, double L_boundary, double C_la, double K_boundary, double K1, double A,
                           double B) {
    for (double v : {L_la, L_boundary, C_la, K_boundary, K1})
        require(v >= 0.0 && std::isfinite(v), "constants must be finite and nonnegative");
    const double lf = bernoulli_logfactor(A, B);
    return L_la + B / A * L_boundary + B * lf * (C_la + K_boundary + K1);
}

}  // namespace sticky
