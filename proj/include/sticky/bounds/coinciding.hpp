#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "sticky/error.hpp"
#include "sticky/geometry/curvature.hpp"

namespace sticky {

namespace detail {

/// (m n - 1)/n with its limit m at n = inf.
inline double dimension_ratio(double m, double n) {
    if (std::isinf(n)) return m;
    return (m * n - 1.0) / n;
}

inline void require_flag(bool flag, const char* name) {
    if (!flag) throw AssumptionError(std::string("assumption flag '") + name + "' is not set");
}

}  // namespace detail

/// Mixed-term constant (n-1)/(n k_alpha_n) for coinciding boundary weights,
/// weighted Ricci bound k_alpha_n > 0, II >= 0 and nonnegative integrated
/// weighted mean curvature. The matching K2 is 0.
inline double coinciding_K1(double n, double k_alpha_n, const AssumptionFlags& flags) {
    detail::require_flag(flags.beta_equals_alpha_on_boundary, "beta_equals_alpha_on_boundary");
    detail::require_flag(flags.H_alpha_integral_nonneg, "H_alpha_integral_nonneg");
    require(n >= 1.0, "dimension parameter n must be at least 1");
    require(k_alpha_n > 0.0 && std::isfinite(k_alpha_n), "weighted Ricci lower bound k_alpha_n must be positive");
    return detail::dimension_ratio(1.0, n) / k_alpha_n;
}

inline double coinciding_K1(const CurvatureBounds& curv) {
    require(curv.k_alpha_n.has_value(), "weighted Ricci lower bound k_alpha_n is not given");
    require(!(curv.n < curv.d), "dimension parameter n must satisfy n >= d");
    require(curv.gamma1 >= 0.0, "second fundamental form lower bound must be nonnegative");
    return coinciding_K1(curv.n, *curv.k_alpha_n, curv.flags);
}

/// Direct Poincare bound max((3n-1)/(n ii_lower), (n-1)/(n k_alpha_n)) for
/// coinciding weights with II >= ii_lower > 0 and pointwise H_alpha >= 0.
inline double coinciding_direct(double n, double k_alpha_n, double ii_lower, const AssumptionFlags& flags) {
    detail::require_flag(flags.beta_equals_alpha_on_boundary, "beta_equals_alpha_on_boundary");
    detail::require_flag(flags.H_alpha_pointwise_nonneg, "H_alpha_pointwise_nonneg");
    detail::require_flag(flags.II_lower_positive, "II_lower_positive");
    require(n >= 1.0, "dimension parameter n must be at least 1");
    require(k_alpha_n > 0.0 && std::isfinite(k_alpha_n), "weighted Ricci lower bound k_alpha_n must be positive");
    require(ii_lower > 0.0 && std::isfinite(ii_lower), "second fundamental form lower bound must be positive");
    return std::max(detail::dimension_ratio(3.0, n) / ii_lower, detail::dimension_ratio(1.0, n) / k_alpha_n);
}

inline double coinciding_direct(const CurvatureBounds& curv) {
    require(curv.k_alpha_n.has_value(), "weighted Ricci lower bound k_alpha_n is not given");
    require(!(curv.n < curv.d), "dimension parameter n must satisfy n >= d");
    return coinciding_direct(curv.n, *curv.k_alpha_n, curv.gamma1, curv.flags);
}

}  // namespace sticky
