#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sticky/error.hpp"
#include "sticky/numerics.hpp"

namespace sticky::spectral {

inline constexpr double kOrderLow = 1.5;
inline constexpr double kOrderHigh = 2.5;
/// Differences below this relative size are treated as solver noise.
inline constexpr double kExactTolerance = 1e-10;

/// Fit of v(h) = v* + C h^q.
struct Extrapolation {
    double value = 0.0;
    double order = std::numeric_limits<double>::quiet_NaN();
    double coefficient = 0.0;
    double residual = 0.0;
    /// "ok", "exact" (no h-dependence within roundoff), "order_out_of_range",
    /// "nonmonotone", "oscillating"
    std::string status;

    bool flagged() const { return status != "ok"; }
    /// exact data is a pass for convergence purposes
    bool acceptable() const { return status == "ok" || status == "exact"; }
};

namespace detail {

struct LinearFit {
    double value, coefficient, residual;
};

inline LinearFit fit_fixed_order(const std::vector<double>& v, const std::vector<double>& h, double q) {
    const int n = static_cast<int>(v.size());
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = std::pow(h[i] / h[0], q);
        y(i) = v[i];
    }
    const Eigen::Vector2d c = X.colPivHouseholderQr().solve(y);
    return {c(0), c(1) / std::pow(h[0], q), (X * c - y).norm()};
}

}  // namespace detail

inline Extrapolation richardson(const std::vector<double>& values, const std::vector<double>& h) {
    require(values.size() == h.size(), "richardson: size mismatch");
    require(values.size() >= 3, "richardson needs at least three values");
    Extrapolation out;
    out.value = values.back();
    for (std::size_t i = 0; i < h.size(); ++i) {
        require(h[i] > 0.0, "mesh sizes must be positive");
        if (i > 0 && !(h[i] < h[i - 1])) {
            out.status = "nonmonotone";
            return out;
        }
    }
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    const double noise = kExactTolerance * std::max(scale, 1e-300);
    bool constant = true;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (std::abs(values[i] - values[i - 1]) > noise) constant = false;
    if (constant) {
        out.status = "exact";
        return out;
    }
    for (std::size_t i = 2; i < values.size(); ++i) {
        const double d1 = values[i - 1] - values[i - 2], d2 = values[i] - values[i - 1];
        if (d1 * d2 <= 0.0) {
            out.status = "oscillating";
            return out;
        }
    }

    auto misfit = [&](double q) { return detail::fit_fixed_order(values, h, q).residual; };
    double q;
    const double ratio = h[0] / h[1];
    bool geometric = values.size() == 3 && std::abs(h[1] / h[2] - ratio) <= 1e-12 * ratio;
    if (geometric) {
        q = std::log((values[1] - values[0]) / (values[2] - values[1])) / std::log(ratio);
    } else {
        const auto grid = numerics::minimize_on_log_grid(misfit, 0.05, 8.0, 64);
        q = grid.x;
    }
    const auto fit = detail::fit_fixed_order(values, h, q);
    out.value = fit.value;
    out.order = q;
    out.coefficient = fit.coefficient;
    out.residual = fit.residual;
    out.status = (q >= kOrderLow && q <= kOrderHigh) ? "ok" : "order_out_of_range";
    return out;
}

/// Per-mesh values of a spectral constant with the extrapolated limit.
struct SpectralEstimate {
    std::vector<double> h;
    std::vector<double> eigenvalues;
    std::vector<double> values;
    std::vector<double> residuals;
    std::vector<int> dof;
    std::string method;
    Extrapolation fit;     ///< on the eigenvalues
    double value = 0.0;    ///< constant derived from the extrapolated eigenvalue
    double max_residual = 0.0;
};

}  // namespace sticky::spectral
