#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "sticky/error.hpp"

namespace sticky {

/// Assumption flags that some bounds consume. They are never verified by
/// evaluating mean-curvature fields; the caller asserts them.
struct AssumptionFlags {
    bool beta_equals_alpha_on_boundary = false;
    bool H_alpha_integral_nonneg = false;
    bool H_alpha_pointwise_nonneg = false;
    bool II_lower_positive = false;
};

/// Curvature data of the manifold and its boundary:
///   Ric >= (d-1) k1,  sect <= k2,  gamma1 id <= II <= gamma2 id,
/// plus the optional weighted Ricci bound Ric_{alpha,n} >= k_alpha_n g.
struct CurvatureBounds {
    int d = 2;
    double k1 = 0.0;
    double k2 = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double n = std::numeric_limits<double>::infinity();
    std::optional<double> k_alpha_n;
    AssumptionFlags flags;

    bool n_is_infinite() const { return std::isinf(n); }

    /// Throws DomainError when the data cannot describe a compact manifold
    /// with boundary (gamma1 > gamma2, k2 <= -gamma2^2, n < d, d < 2).
    void validate() const {
        require(d >= 2, "dimension d must be at least 2");
        require(std::isfinite(k1) && std::isfinite(k2) && std::isfinite(gamma1) && std::isfinite(gamma2),
                "curvature bounds must be finite");
        require(gamma1 <= gamma2, "second fundamental form bounds need gamma1 <= gamma2");
        if (!(k2 > -gamma2 * gamma2)) {
            std::ostringstream msg;
            msg << "sectional upper bound k2 = " << k2 << " must exceed -gamma2^2 = " << -gamma2 * gamma2;
            throw DomainError(msg.str());
        }
        require(!(n < d), "weighted Ricci dimension n must satisfy n >= d");
    }
};

}  // namespace sticky
