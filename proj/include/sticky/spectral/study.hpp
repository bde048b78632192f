#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "sticky/error.hpp"
#include "sticky/geometry/benchmark.hpp"
#include "sticky/geometry/mesh.hpp"
#include "sticky/geometry/weights.hpp"
#include "sticky/spectral/assembly.hpp"
#include "sticky/spectral/problems.hpp"
#include "sticky/spectral/richardson.hpp"

namespace sticky::spectral {

enum class Quantity { StickyPoincare, NoBdPoincare, NeumannPoincare, BoundaryPoincare, Steklov, TraceNorm };

inline std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::StickyPoincare: return "C_mu";
        case Quantity::NoBdPoincare: return "C_mu_no_bd";
        case Quantity::NeumannPoincare: return "C_la";
        case Quantity::BoundaryPoincare: return "C_sib";
        case Quantity::Steklov: return "sigma";
        case Quantity::TraceNorm: return "trace_norm";
    }
    return "?";
}

inline std::vector<double> default_ladder(double h0) { return {h0, h0 / 2, h0 / 4}; }

/// Meshes for a decreasing sequence of sizes. Halving steps reuse the
/// previous mesh by uniform refinement so the spaces are nested.
inline std::vector<std::shared_ptr<const TriMesh>> mesh_ladder(const BenchmarkGeometry& g,
                                                               const std::vector<double>& hs,
                                                               std::size_t dof_cap = kDefaultDofCap) {
    require(!hs.empty(), "empty mesh ladder");
    std::vector<std::shared_ptr<const TriMesh>> out;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (i > 0 && std::abs(hs[i] - hs[i - 1] / 2) <= 1e-12 * hs[i])
            out.push_back(std::make_shared<const TriMesh>(refine(*out.back(), dof_cap)));
        else
            out.push_back(std::make_shared<const TriMesh>(mesh(g, hs[i], dof_cap)));
    }
    return out;
}

inline SpectralValue solve_quantity(const DiscreteForm& f, Quantity q, const SolverOptions& opt = {}) {
    switch (q) {
        case Quantity::StickyPoincare: return solve_sticky_poincare(f, opt);
        case Quantity::NoBdPoincare: return solve_no_bd_poincare(f, opt);
        case Quantity::NeumannPoincare: return solve_neumann_poincare(f, opt);
        case Quantity::BoundaryPoincare: return solve_boundary_poincare(f, opt);
        case Quantity::Steklov: return solve_steklov(f);
        case Quantity::TraceNorm: return estimate_trace_norm(f);
    }
    throw DomainError("unknown spectral quantity");
}

/// Maps an extrapolated eigenvalue to the reported constant.
inline double constant_from_eigenvalue(Quantity q, double eigenvalue) {
    switch (q) {
        case Quantity::Steklov: return eigenvalue;
        case Quantity::TraceNorm: return std::sqrt(eigenvalue);
        default: return 1.0 / eigenvalue;
    }
}

inline SpectralEstimate study(const std::vector<DiscreteForm>& forms, Quantity q, const SolverOptions& opt = {}) {
    require(!forms.empty(), "study needs at least one form");
    SpectralEstimate est;
    for (const auto& f : forms) {
        const auto v = solve_quantity(f, q, opt);
        est.h.push_back(f.h());
        est.eigenvalues.push_back(v.eigenvalue);
        est.values.push_back(v.value);
        est.residuals.push_back(v.residual);
        est.dof.push_back(v.dof);
        est.max_residual = std::max(est.max_residual, v.residual);
        if (est.method.empty())
            est.method = v.method;
        else if (est.method.find(v.method) == std::string::npos)
            est.method += "+" + v.method;
    }
    if (forms.size() >= 3) {
        est.fit = richardson(est.eigenvalues, est.h);
    } else {
        est.fit.value = est.eigenvalues.back();
        est.fit.status = "too_few_meshes";
    }
    est.value = constant_from_eigenvalue(q, est.fit.value);
    return est;
}

inline std::vector<DiscreteForm> assemble_ladder(const BenchmarkGeometry& g, const WeightPair& w,
                                                 const std::vector<double>& hs, const AssemblyOptions& opt = {},
                                                 std::size_t dof_cap = kDefaultDofCap) {
    std::vector<DiscreteForm> forms;
    for (auto& m : mesh_ladder(g, hs, dof_cap)) forms.push_back(assemble(m, g, w, opt));
    return forms;
}

}  // namespace sticky::spectral
