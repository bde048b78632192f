#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "sticky/error.hpp"
#include "sticky/spectral/assembly.hpp"
#include "sticky/spectral/eigensolver.hpp"

namespace sticky::spectral {

/// A spectral constant together with the eigenvalue it came from.
struct SpectralValue {
    double value = 0.0;       ///< the constant (C = 1/eta, sigma, trace norm, ...)
    double eigenvalue = 0.0;  ///< the underlying discrete eigenvalue
    double residual = 0.0;
    std::string method;
    int dof = 0;
    double h = 0.0;
};

inline SpectralValue from_gap(const EigenPair& p, const DiscreteForm& f, int dof) {
    SpectralValue v;
    v.eigenvalue = p.value;
    v.value = 1.0 / p.value;
    v.residual = p.residual;
    v.method = p.method;
    v.dof = dof;
    v.h = f.h();
    return v;
}

/// Poincare constant of mu for the sticky form E.
inline SpectralValue solve_sticky_poincare(const DiscreteForm& f, const SolverOptions& opt = {}) {
    return from_gap(smallest_nonzero(f.K_sticky(), f.M_total(), opt), f, f.size());
}

/// Poincare constant of mu for the form without boundary diffusion.
inline SpectralValue solve_no_bd_poincare(const DiscreteForm& f, const SolverOptions& opt = {}) {
    return from_gap(smallest_nonzero(f.K_int, f.M_total(), opt), f, f.size());
}

/// C_la: both sides with the normalized interior measure, so the ratio is that of (K_int, M_int).
inline SpectralValue solve_neumann_poincare(const DiscreteForm& f, const SolverOptions& opt = {}) {
    return from_gap(smallest_nonzero(f.K_int, f.M_int, opt), f, f.size());
}

/// C_sib on the boundary loop.
inline SpectralValue solve_boundary_poincare(const DiscreteForm& f, const SolverOptions& opt = {}) {
    const SparseMatrix K = submatrix(f.K_bd, f.boundary, f.boundary);
    const SparseMatrix M = submatrix(f.M_bd, f.boundary, f.boundary);
    return from_gap(smallest_nonzero(K, M, opt), f, static_cast<int>(f.boundary.size()));
}

/// Schur complement of a sparse SPD-on-interior matrix onto the boundary unknowns.
inline Eigen::MatrixXd schur_onto_boundary(const DiscreteForm& f, const SparseMatrix& K) {
    const auto interior = interior_indices(f);
    const SparseMatrix Kii = submatrix(K, interior, interior);
    const SparseMatrix Kib = submatrix(K, interior, f.boundary);
    const Eigen::MatrixXd Kbb = Eigen::MatrixXd(submatrix(K, f.boundary, f.boundary));
    Eigen::SimplicialLDLT<SparseMatrix> solver(Kii);
    if (solver.info() != Eigen::Success) throw SolverError("interior block factorization failed");
    const Eigen::MatrixXd X = solver.solve(Eigen::MatrixXd(Kib));
    if (solver.info() != Eigen::Success) throw SolverError("interior block solve failed");
    Eigen::MatrixXd S = Kbb - Eigen::MatrixXd(Kib.transpose()) * X;
    return 0.5 * (S + S.transpose());
}

/// First nontrivial doubly weighted Steklov eigenvalue: min over harmonic
/// extensions of int |grad f|^2 alpha / int f^2 beta, via the discrete
/// Dirichlet-to-Neumann map.
inline SpectralValue solve_steklov(const DiscreteForm& f) {
    const Eigen::MatrixXd S = schur_onto_boundary(f, f.K_int);
    const Eigen::MatrixXd M = Eigen::MatrixXd(submatrix(f.M_bd, f.boundary, f.boundary));
    const EigenPair p = smallest_nonzero_dense(S, M);
    SpectralValue v;
    v.value = v.eigenvalue = p.value;
    v.residual = p.residual;
    v.method = "schur-dense";
    v.dof = static_cast<int>(f.boundary.size());
    v.h = f.h();
    return v;
}

/// sup Var_{sigma_beta}(f) / int |grad f|^2 dlambda_alpha over the full P1
/// space, without harmonic extension. Dense; equals A / (B sigma).
inline double boundary_variance_ratio(const DiscreteForm& f) {
    const int n = f.size();
    require(n <= 4 * kDenseCap, "full-space boundary variance ratio is dense only");
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd w = f.M_bd * ones;
    const double B = w.sum();
    const Eigen::MatrixXd Kp = Eigen::MatrixXd(f.K_int) + w * w.transpose();
    const Eigen::MatrixXd V = Eigen::MatrixXd(f.M_bd) - w * w.transpose() / B;
    const auto es = dense_pencil(V, Kp);
    const double nu = es.eigenvalues()(n - 1);
    return f.A / B * nu;
}

/// Norm of the trace W^{1,2}(alpha) -> L^2(beta) as sqrt of the largest
/// eigenvalue of M_bd u = nu (K_int + M_int) u, reduced to the boundary.
inline SpectralValue estimate_trace_norm(const DiscreteForm& f) {
    const SparseMatrix H = f.K_int + f.M_int;
    const Eigen::MatrixXd S = schur_onto_boundary(f, H);
    const Eigen::MatrixXd M = Eigen::MatrixXd(submatrix(f.M_bd, f.boundary, f.boundary));
    const auto es = dense_pencil(S, M);
    const double lam = es.eigenvalues()(0);
    require(lam > 0.0, "trace eigenproblem lost definiteness");
    SpectralValue v;
    v.eigenvalue = 1.0 / lam;
    v.value = std::sqrt(v.eigenvalue);
    v.residual = relative_residual(S, M, lam, es.eigenvectors().col(0));
    v.method = "schur-dense";
    v.dof = static_cast<int>(f.boundary.size());
    v.h = f.h();
    return v;
}

/// Largest nu of the full (unreduced) trace pencil; dense cross-check.
inline double trace_eigenvalue_full(const DiscreteForm& f) {
    require(f.size() <= 4 * kDenseCap, "full trace pencil is dense only");
    const auto es = dense_pencil(Eigen::MatrixXd(f.M_bd), Eigen::MatrixXd(f.K_int + f.M_int));
    return es.eigenvalues()(f.size() - 1);
}

}  // namespace sticky::spectral
