#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "sticky/error.hpp"
#include "sticky/spectral/assembly.hpp"
#include "sticky/spectral/eigensolver.hpp"
#include "sticky/spectral/entropy.hpp"

namespace sticky::spectral {

enum class LsiForm { Sticky, NoBoundaryDiffusion, Interior, Boundary, BoundaryInterior };

inline std::string to_string(LsiForm w) {
    switch (w) {
        case LsiForm::Sticky: return "sticky";
        case LsiForm::NoBoundaryDiffusion: return "no_bd";
        case LsiForm::Interior: return "interior";
        case LsiForm::Boundary: return "boundary";
        case LsiForm::BoundaryInterior: return "boundary_interior";
    }
    return "?";
}

struct LsiOptions {
    int restarts = 32;
    int warm_starts = 3;
    int iterations = 150;
    double warm_epsilon = 1e-4;
    std::uint64_t seed = 20240917;
};

/// Best ratio Ent_m(f^2) / f^T K f found. A lower estimate of the LSI constant
/// of the discrete problem.
struct LsiEstimate {
    double value = 0.0;
    bool degenerate = false;
    int best_start = -1;  ///< index: warm starts first, then random restarts
    int starts = 0;
    double warm_value = 0.0;  ///< best ratio among the unoptimized warm starts
};

/// Energy matrix and entropy measure (a probability vector) of a functional.
struct LsiProblem {
    SparseMatrix K;
    Eigen::VectorXd m;
};

inline LsiProblem lsi_problem(const DiscreteForm& f, LsiForm which) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(f.size());
    const Eigen::VectorXd m_int = f.M_int * ones;
    const Eigen::VectorXd m_bd = f.M_bd * ones;
    LsiProblem p;
    switch (which) {
        case LsiForm::Sticky:
            p.K = f.K_sticky();
            p.m = m_int + m_bd;
            break;
        case LsiForm::NoBoundaryDiffusion:
            p.K = f.K_int;
            p.m = m_int + m_bd;
            break;
        case LsiForm::Interior:
            p.K = f.K_int / f.A;
            p.m = m_int / f.A;
            break;
        case LsiForm::Boundary: {
            p.K = submatrix(f.K_bd, f.boundary, f.boundary) / f.B;
            p.m.resize(static_cast<int>(f.boundary.size()));
            for (std::size_t i = 0; i < f.boundary.size(); ++i) p.m(static_cast<int>(i)) = m_bd(f.boundary[i]) / f.B;
            break;
        }
        case LsiForm::BoundaryInterior:
            p.K = f.K_int / f.A;
            p.m = m_bd / f.B;
            break;
    }
    p.m /= p.m.sum();
    return p;
}

namespace detail {

struct LsiState {
    double ratio = 0.0;
    double energy = 0.0;
    double ent = 0.0;
};

inline LsiState lsi_ratio(const SparseMatrix& K, const Eigen::VectorXd& m, const Eigen::VectorXd& f) {
    LsiState s;
    s.energy = f.dot(K * f);
    s.ent = entropy_of_square(f, m);
    s.ratio = s.energy > 1e-300 ? s.ent / s.energy : 0.0;
    return s;
}

inline Eigen::VectorXd lsi_gradient(const SparseMatrix& K, const Eigen::VectorXd& m, const Eigen::VectorXd& f,
                                    const LsiState& s) {
    const double Z = m.dot(f.array().square().matrix());
    Eigen::VectorXd g(f.size());
    for (int i = 0; i < f.size(); ++i) {
        const double f2 = f(i) * f(i);
        g(i) = f2 > 0.0 ? 2.0 * m(i) * f(i) * std::log(f2 / Z) : 0.0;
    }
    return (g - 2.0 * s.ratio * (K * f)) / s.energy;
}

inline void project(Eigen::VectorXd& f, const Eigen::VectorXd& m) {
    f /= std::sqrt(m.dot(f.array().square().matrix()));
}

}  // namespace detail

/// Preconditioned projected gradient ascent of Ent_m(f^2) / f^T K f on the sphere
/// int f^2 dm = 1. The Riesz map of K + diag(m) is the preconditioner.
inline LsiEstimate estimate_lsi_lower(const LsiProblem& p, const LsiOptions& opt = {}) {
    const int n = static_cast<int>(p.m.size());
    require(p.K.rows() == n && n >= 2, "LSI problem size mismatch");
    detail::check_measure(p.m);

    SparseMatrix P = p.K;
    const double mass_scale = p.m.maxCoeff();
    for (int i = 0; i < n; ++i) P.coeffRef(i, i) += p.m(i) + 1e-12 * mass_scale;
    Eigen::SimplicialLDLT<SparseMatrix> precond(P);
    if (precond.info() != Eigen::Success) throw SolverError("LSI preconditioner factorization failed");

    std::vector<Eigen::VectorXd> starts;
    // warm starts from the first eigenvectors of (K, diag m), regularized where m vanishes
    if (opt.warm_starts > 0) {
        Eigen::MatrixXd Md = Eigen::MatrixXd::Zero(n, n);
        Md.diagonal() = p.m.array() + 1e-12 * mass_scale;
        require(n <= kDenseCap, "LSI warm starts use the dense eigensolver; mesh too fine");
        const auto es = dense_pencil(Eigen::MatrixXd(p.K), Md);
        for (int k = 1; k <= opt.warm_starts && k < n; ++k) {
            Eigen::VectorXd u = es.eigenvectors().col(k);
            u /= u.cwiseAbs().maxCoeff();
            starts.push_back(Eigen::VectorXd::Ones(n) + opt.warm_epsilon * u);
        }
    }
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> amplitude(0.1, 2.0);
    for (int r = 0; r < opt.restarts; ++r) {
        Eigen::VectorXd xi(n);
        for (int i = 0; i < n; ++i) xi(i) = normal(rng) * std::sqrt(p.m(i) + 1e-12 * mass_scale);
        Eigen::VectorXd g = precond.solve(xi);
        g /= g.cwiseAbs().maxCoeff();
        starts.push_back(Eigen::VectorXd::Ones(n) + amplitude(rng) * g);
    }

    LsiEstimate out;
    out.starts = static_cast<int>(starts.size());
    for (int s = 0; s < out.starts; ++s) {
        Eigen::VectorXd f = starts[s];
        detail::project(f, p.m);
        auto state = detail::lsi_ratio(p.K, p.m, f);
        if (s < opt.warm_starts) out.warm_value = std::max(out.warm_value, state.ratio);
        if (state.energy <= 1e-300) continue;
        double step = 1e-2;
        for (int it = 0; it < opt.iterations; ++it) {
            const Eigen::VectorXd grad = detail::lsi_gradient(p.K, p.m, f, state);
            Eigen::VectorXd dir = precond.solve(grad);
            const double slope = grad.dot(dir);
            if (!(slope > 0.0)) break;
            dir /= std::sqrt(p.m.dot(dir.array().square().matrix()));
            bool moved = false;
            for (int tries = 0; tries < 40; ++tries) {
                Eigen::VectorXd trial = f + step * dir;
                detail::project(trial, p.m);
                const auto next = detail::lsi_ratio(p.K, p.m, trial);
                if (next.energy > 1e-300 && next.ratio > state.ratio) {
                    f = trial;
                    const double gain = next.ratio - state.ratio;
                    state = next;
                    step *= 2.0;
                    moved = gain > 1e-13 * state.ratio;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        if (state.ratio > out.value) {
            out.value = state.ratio;
            out.best_start = s;
        }
    }
    out.degenerate = out.best_start < 0;
    return out;
}

inline LsiEstimate estimate_lsi_lower(const DiscreteForm& f, LsiForm which, const LsiOptions& opt = {}) {
    return estimate_lsi_lower(lsi_problem(f, which), opt);
}

}  // namespace sticky::spectral
