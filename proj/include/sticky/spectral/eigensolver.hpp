#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "sticky/error.hpp"
#include "sticky/spectral/assembly.hpp"

namespace sticky::spectral {

/// Largest system the dense solver accepts.
inline constexpr int kDenseCap = 3000;
/// Auto switches to Lanczos above this size.
inline constexpr int kAutoDenseCap = 400;
inline constexpr double kResidualTol = 1e-8;

enum class SolverPath { Auto, Dense, Lanczos };

struct SolverOptions {
    SolverPath path = SolverPath::Auto;
    int dense_cap = kAutoDenseCap;
    double shift = -1.0;  ///< shift-invert pole, below the spectrum
    int max_iterations = 400;
    double tolerance = 1e-11;  ///< relative residual target of the Lanczos loop
};

/// Smallest eigenpair of K u = eta M u on the M-orthogonal complement of the constants.
struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;
    double residual = 0.0;  ///< ||(K - eta M) u|| / ||M u||
    std::string method;
    int iterations = 0;
};

inline double relative_residual(const SparseMatrix& K, const SparseMatrix& M, double eta, const Eigen::VectorXd& u) {
    const Eigen::VectorXd Mu = M * u;
    return (K * u - eta * Mu).norm() / Mu.norm();
}

inline double relative_residual(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M, double eta,
                                const Eigen::VectorXd& u) {
    const Eigen::VectorXd Mu = M * u;
    return (K * u - eta * Mu).norm() / Mu.norm();
}

/// All eigenpairs of the dense pencil (K, M), M positive definite, ascending.
inline Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> dense_pencil(const Eigen::MatrixXd& K,
                                                                              const Eigen::MatrixXd& M) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw SolverError("dense generalized eigensolve failed");
    return es;
}

/// Dense path: the kernel eigenvalue (constants) is dropped and the next one returned.
inline EigenPair smallest_nonzero_dense(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M) {
    require(K.rows() == M.rows() && K.rows() >= 2, "eigenproblem needs at least two unknowns");
    const auto es = dense_pencil(K, M);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(K.rows());
    const double total = ones.dot(M * ones);
    int pick = -1;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const Eigen::VectorXd& v = es.eigenvectors().col(i);
        // eigenvectors are M-orthonormal; the constant one carries the full mean
        const double mean = std::abs(ones.dot(M * v)) / std::sqrt(total);
        if (mean < 0.5) {
            pick = i;
            break;
        }
    }
    if (pick < 0) throw SolverError("no eigenvector orthogonal to the constants");
    EigenPair p;
    p.value = es.eigenvalues()(pick);
    p.vector = es.eigenvectors().col(pick);
    p.residual = relative_residual(K, M, p.value, p.vector);
    p.method = "dense";
    return p;
}

inline EigenPair smallest_nonzero_dense(const SparseMatrix& K, const SparseMatrix& M) {
    return smallest_nonzero_dense(Eigen::MatrixXd(K), Eigen::MatrixXd(M));
}

/// Shift-invert Lanczos on (K - shift M)^{-1} M with full M-reorthogonalization
/// and deflation of the constant vector.
inline EigenPair smallest_nonzero_lanczos(const SparseMatrix& K, const SparseMatrix& M,
                                          const SolverOptions& opt = {}) {
    const int n = static_cast<int>(K.rows());
    require(n >= 3 && M.rows() == n, "eigenproblem needs at least three unknowns");
    require(opt.shift < 0.0, "shift must lie below the spectrum");
    Eigen::SimplicialLDLT<SparseMatrix> solver;
    const SparseMatrix shifted = K - opt.shift * M;
    solver.compute(shifted);
    if (solver.info() != Eigen::Success) throw SolverError("factorization of the shifted stiffness failed");

    auto m_dot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(M * b); };
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    ones /= std::sqrt(m_dot(ones, ones));

    std::vector<Eigen::VectorXd> basis;
    // deterministic start vector with all Fourier modes present
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = std::sin(1.0 + 0.7548776662466927 * i) + 0.1 * std::cos(0.31 * i * i);
    auto orthogonalize = [&](Eigen::VectorXd& x) {
        for (int pass = 0; pass < 2; ++pass) {
            x -= m_dot(ones, x) * ones;
            for (const auto& q : basis) x -= m_dot(q, x) * q;
        }
    };
    orthogonalize(v);
    v /= std::sqrt(m_dot(v, v));
    basis.push_back(v);

    std::vector<double> alpha, beta;
    EigenPair best;
    best.method = "lanczos";
    const int cap = std::min(opt.max_iterations, n - 1);
    for (int k = 0; k < cap; ++k) {
        Eigen::VectorXd w = solver.solve(M * basis.back());
        if (solver.info() != Eigen::Success) throw SolverError("shift-invert solve failed");
        alpha.push_back(m_dot(basis.back(), w));
        orthogonalize(w);
        const double b = std::sqrt(std::max(0.0, m_dot(w, w)));

        const int m = static_cast<int>(alpha.size());
        if (m >= 4 && (m % 4 == 0 || b < 1e-14 || k + 1 == cap)) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                T(i, i) = alpha[i];
                if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            const Eigen::VectorXd y = es.eigenvectors().col(m - 1);
            Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
            for (int i = 0; i < m; ++i) u += y(i) * basis[i];
            const double eta = u.dot(K * u) / m_dot(u, u);
            best.value = eta;
            best.vector = u;
            best.residual = relative_residual(K, M, eta, u);
            best.iterations = m;
            if (best.residual <= opt.tolerance) return best;
        }
        if (b < 1e-14) break;
        beta.push_back(b);
        basis.push_back(w / b);
    }
    if (best.residual <= kResidualTol) return best;
    std::ostringstream msg;
    msg << "Lanczos did not converge: residual " << best.residual << " after " << best.iterations << " steps";
    throw SolverError(msg.str());
}

inline EigenPair smallest_nonzero(const SparseMatrix& K, const SparseMatrix& M, const SolverOptions& opt = {}) {
    const bool dense =
        opt.path == SolverPath::Dense || (opt.path == SolverPath::Auto && K.rows() <= opt.dense_cap);
    EigenPair p = dense ? smallest_nonzero_dense(K, M) : smallest_nonzero_lanczos(K, M, opt);
    if (!(p.residual <= kResidualTol)) {
        std::ostringstream msg;
        msg << p.method << " eigenpair residual " << p.residual << " exceeds " << kResidualTol;
        throw SolverError(msg.str());
    }
    return p;
}

}  // namespace sticky::spectral
