#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Core>

#include "sticky/error.hpp"

namespace sticky::spectral {

namespace detail {

inline void check_measure(const Eigen::VectorXd& m) {
    require(m.size() > 0, "empty measure");
    require((m.array() >= 0.0).all(), "negative measure weight");
    require(std::abs(m.sum() - 1.0) <= 1e-9, "measure weights must sum to 1");
}

/// (1+q) log(1+q) - q, accurate for small q.
inline double entropy_kernel(double q) {
    if (q <= -1.0) return 1.0;
    if (std::abs(q) < 1e-3) {
        const double q2 = q * q;
        return q2 / 2 - q2 * q / 6 + q2 * q2 / 12 - q2 * q2 * q / 20 + q2 * q2 * q2 / 30;
    }
    return (1 + q) * std::log1p(q) - q;
}

}  // namespace detail

inline double mean(const Eigen::VectorXd& f, const Eigen::VectorXd& m) { return m.dot(f); }

inline double variance(const Eigen::VectorXd& f, const Eigen::VectorXd& m) {
    const double c = mean(f, m);
    return m.dot((f.array() - c).square().matrix());
}

/// Ent_m(g) = int g log g dm - (int g dm) log(int g dm) for g >= 0, with 0 log 0 = 0.
/// Summed as a sum of nonnegative terms, so small perturbations of a constant
/// keep full relative accuracy.
inline double entropy(const Eigen::VectorXd& g, const Eigen::VectorXd& m) {
    detail::check_measure(m);
    require(g.size() == m.size(), "entropy: size mismatch");
    require((g.array() >= 0.0).all(), "entropy needs nonnegative values");
    const double Z = m.dot(g);
    if (Z <= 0.0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < g.size(); ++i)
        if (m(i) > 0.0) s += m(i) * detail::entropy_kernel(g(i) / Z - 1.0);
    return Z * s;
}

inline double entropy_of_square(const Eigen::VectorXd& f, const Eigen::VectorXd& m) {
    return entropy(f.array().square().matrix(), m);
}

/// Both sides of Ent((f + a)^2) <= Ent(f^2) + 2 int f^2.
inline std::pair<double, double> rothaus_check(const Eigen::VectorXd& f, double a, const Eigen::VectorXd& m) {
    const Eigen::VectorXd shifted = f.array() + a;
    const double lhs = entropy_of_square(shifted, m);
    const double rhs = entropy_of_square(f, m) + 2.0 * m.dot(f.array().square().matrix());
    return {lhs, rhs};
}

/// A function on the disjoint union of an interior and a boundary sample, with
/// the mixture mu = A m_int + B m_bd (both parts probability vectors).
struct MixtureSample {
    Eigen::VectorXd f_int, m_int, f_bd, m_bd;
    double A = 0.5;
    double B = 0.5;

    Eigen::VectorXd values() const {
        Eigen::VectorXd v(f_int.size() + f_bd.size());
        v << f_int, f_bd;
        return v;
    }
    Eigen::VectorXd measure() const {
        Eigen::VectorXd v(m_int.size() + m_bd.size());
        v << A * m_int, B * m_bd;
        return v;
    }
};

/// A Var_int + B Var_bd + A B (mean_int - mean_bd)^2
inline double variance_mixture(const MixtureSample& s) {
    const double dm = mean(s.f_int, s.m_int) - mean(s.f_bd, s.m_bd);
    return s.A * variance(s.f_int, s.m_int) + s.B * variance(s.f_bd, s.m_bd) + s.A * s.B * dm * dm;
}

/// A Ent_int + B Ent_bd + A B logfactor (Var_int + Var_bd + (mean_int - mean_bd)^2)
inline double entropy_mixture_bound(const MixtureSample& s, double logfactor) {
    const double dm = mean(s.f_int, s.m_int) - mean(s.f_bd, s.m_bd);
    return s.A * entropy_of_square(s.f_int, s.m_int) + s.B * entropy_of_square(s.f_bd, s.m_bd) +
           s.A * s.B * logfactor * (variance(s.f_int, s.m_int) + variance(s.f_bd, s.m_bd) + dm * dm);
}

}  // namespace sticky::spectral
