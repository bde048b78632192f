#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <utility>

#include "sticky/error.hpp"
#include "sticky/geometry/benchmark.hpp"
#include "sticky/geometry/expression.hpp"
#include "sticky/numerics.hpp"

namespace sticky {

/// A C^1 function of the geodesic distance r from the center, with its derivative.
class RadialProfile {
public:
    using Function = std::function<Jet(double)>;

    RadialProfile() : RadialProfile(constant(1.0)) {}

    static RadialProfile constant(double c) {
        std::ostringstream text;
        text.precision(17);
        text << c;
        return RadialProfile([c](double) { return Jet{c, 0.0}; }, text.str(), true);
    }

    static RadialProfile from_expression(const std::string& text) {
        auto expr = std::make_shared<Expression>(Expression::parse(text, {"r"}));
        const bool flat = expr->independent_of("r");
        return RadialProfile(
            [expr](double r) { return expr->eval({{"r", r}}, "r"); }, text, flat);
    }

    static RadialProfile from_function(Function f, std::string description, bool is_constant = false) {
        return RadialProfile(std::move(f), std::move(description), is_constant);
    }

    Jet operator()(double r) const {
        const Jet j = fn_(r);
        return {scale_ * j.value, scale_ * j.slope};
    }
    double value(double r) const { return scale_ * fn_(r).value; }
    double slope(double r) const { return scale_ * fn_(r).slope; }

    /// |f'| / f, independent of the overall scale.
    double log_gradient(double r) const {
        const Jet j = fn_(r);
        return std::abs(j.slope) / j.value;
    }

    RadialProfile scaled(double factor) const {
        RadialProfile copy = *this;
        copy.scale_ *= factor;
        return copy;
    }

    double scale() const { return scale_; }
    const std::string& description() const { return description_; }
    bool is_constant() const { return constant_; }

private:
    RadialProfile(Function f, std::string description, bool is_constant)
        : fn_(std::move(f)), description_(std::move(description)), constant_(is_constant) {}

    Function fn_;
    std::string description_;
    bool constant_ = false;
    double scale_ = 1.0;
};

/// Interior weight alpha and the interior extension of the boundary weight
/// beta, normalized so that mu = alpha*lambda + beta*sigma is a probability
/// measure. Sup-norms are taken over the closed domain r in [0, inradius].
struct WeightPair {
    RadialProfile alpha;
    RadialProfile beta;
    double A = 0.0;  ///< int alpha dlambda
    double B = 0.0;  ///< int beta dsigma
    double beta_over_alpha_sup = 0.0;
    double beta_sup = 0.0;
    double A_over_alpha_sup = 0.0;
    double log_grad_beta_sup = 0.0;
    double inradius = 0.0;
    /// Sampling resolution used for the sup-norms (10^4 samples + local polish).
    int sup_samples = 0;

    /// |grad beta| / beta at distance rho from the boundary.
    double log_grad_beta_at_depth(double rho) const { return beta.log_gradient(inradius - rho); }
};

namespace detail {

inline constexpr int kSupSamples = 10001;

inline double radial_mass(const BenchmarkGeometry& g, const RadialProfile& p) {
    return 2.0 * numerics::kPi *
           numerics::integrate([&](double r) { return p.value(r) * g.jacobian(r); }, 0.0, g.inradius(), 20, 32);
}

inline void check_positive(const BenchmarkGeometry& g, const RadialProfile& p, const char* which) {
    const double r0 = g.inradius();
    for (int i = 0; i < kSupSamples; ++i) {
        const double r = r0 * i / (kSupSamples - 1);
        const double v = p.value(r);
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream msg;
            msg << which << " profile '" << p.description() << "' is not strictly positive at r = " << r;
            throw DomainError(msg.str());
        }
    }
}

}  // namespace detail

/// Rescales both profiles by the common factor 1/(int alpha dlambda + int beta dsigma).
inline WeightPair normalize_weights(const BenchmarkGeometry& g, const RadialProfile& alpha,
                                    const RadialProfile& beta) {
    detail::check_positive(g, alpha, "alpha");
    detail::check_positive(g, beta, "beta");
    const double r0 = g.inradius();
    const double mass_a = detail::radial_mass(g, alpha);
    const double mass_b = beta.value(r0) * g.boundary_length();
    const double total = mass_a + mass_b;
    // Already normalized inputs keep their scale exactly.
    const double factor = std::abs(total - 1.0) <= 1e-12 ? 1.0 : 1.0 / total;

    WeightPair w;
    w.alpha = alpha.scaled(factor);
    w.beta = beta.scaled(factor);
    w.A = factor == 1.0 ? mass_a : detail::radial_mass(g, w.alpha);
    w.B = factor == 1.0 ? mass_b : w.beta.value(r0) * g.boundary_length();
    w.inradius = r0;
    w.sup_samples = detail::kSupSamples;

    const auto ratio = numerics::scan_sup([&](double r) { return w.beta.value(r) / w.alpha.value(r); }, 0.0, r0,
                                          detail::kSupSamples);
    const auto bsup = numerics::scan_sup([&](double r) { return w.beta.value(r); }, 0.0, r0, detail::kSupSamples);
    const auto inv = numerics::scan_sup([&](double r) { return 1.0 / w.alpha.value(r); }, 0.0, r0,
                                        detail::kSupSamples);
    const auto lg = numerics::scan_sup([&](double r) { return w.beta.log_gradient(r); }, 0.0, r0,
                                       detail::kSupSamples);
    w.beta_over_alpha_sup = ratio.value;
    w.beta_sup = bsup.value;
    w.A_over_alpha_sup = w.A * inv.value;
    w.log_grad_beta_sup = lg.value;
    return w;
}

inline WeightPair normalize_weights(const BenchmarkGeometry& g, const WeightPair& w) {
    return normalize_weights(g, w.alpha, w.beta);
}

/// Gauss-Legendre nodes in the depth variable rho on [0, min(t, inradius)],
/// with the area element 2 pi J(inradius - rho) folded into the weights.
struct RadialQuadrature {
    std::vector<double> depth;
    std::vector<double> weight;
    int order = 0;

    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < depth.size(); ++i) acc += weight[i] * f(depth[i]);
        return acc;
    }
};

inline RadialQuadrature make_tube_quadrature(const BenchmarkGeometry& g, double t, int order, int panels = 8,
                                             const std::vector<double>& breakpoints = {}) {
    require(order >= 2, "quadrature order must be at least 2");
    require(t > 0.0, "tube width must be positive");
    const double r0 = g.inradius();
    const double top = std::min(t, r0);
    std::vector<double> cuts{0.0};
    for (double c : breakpoints)
        if (c > 0.0 && c < top) cuts.push_back(c);
    cuts.push_back(top);
    std::sort(cuts.begin(), cuts.end());
    const auto& rule = numerics::gauss_legendre(order);
    RadialQuadrature q;
    q.order = order;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double width = (cuts[s + 1] - cuts[s]) / panels;
        for (int p = 0; p < panels; ++p) {
            const double half = 0.5 * width, mid = cuts[s] + p * width + half;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double rho = mid + half * rule.nodes[k];
                q.depth.push_back(rho);
                q.weight.push_back(half * rule.weights[k] * 2.0 * numerics::kPi * g.jacobian(r0 - rho));
            }
        }
    }
    return q;
}

/// int_{rho <= t} f(rho) beta dlambda. Widths beyond the inradius cover all of Omega.
template <class F>
double tube_integral(const BenchmarkGeometry& g, const WeightPair& w, double t, F&& integrand, int order = 16,
                     int panels = 8, const std::vector<double>& breakpoints = {}) {
    const auto q = make_tube_quadrature(g, t, order, panels, breakpoints);
    const double r0 = g.inradius();
    return q.integrate([&](double rho) { return integrand(rho) * w.beta.value(r0 - rho); });
}

}  // namespace sticky
