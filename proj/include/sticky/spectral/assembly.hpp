#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sticky/error.hpp"
#include "sticky/geometry/benchmark.hpp"
#include "sticky/geometry/mesh.hpp"
#include "sticky/geometry/weights.hpp"

namespace sticky::spectral {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

inline constexpr double kMinTriangleArea = 1e-14;

/// Discrete weighted forms on a P1 space. All matrices act on the full
/// vertex space; the boundary blocks are zero away from boundary vertices.
struct DiscreteForm {
    SparseMatrix K_int;  ///< int grad f . grad g alpha dlambda
    SparseMatrix K_bd;   ///< int grad^tau f . grad^tau g beta dsigma
    SparseMatrix M_int;  ///< alpha dlambda
    SparseMatrix M_bd;   ///< beta dsigma, lumped
    std::vector<int> boundary;
    std::shared_ptr<const TriMesh> mesh;
    double A = 0.0;  ///< discrete interior mass after normalization
    double B = 0.0;  ///< discrete boundary mass after normalization
    double normalization = 1.0;
    bool lumped_interior = false;

    int size() const { return static_cast<int>(K_int.rows()); }
    double h() const { return mesh ? mesh->h : 0.0; }

    SparseMatrix K_sticky() const { return K_int + K_bd; }
    SparseMatrix M_total() const { return M_int + M_bd; }

    /// Diagonal of the lumped mu-measure (row sums); sums to 1.
    Eigen::VectorXd lumped_mass() const {
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(size());
        return M_int * ones + M_bd * ones;
    }
};

struct AssemblyOptions {
    bool lumped_interior = false;
    bool normalize = true;
};

namespace detail {

/// Pulled-back metric coefficient sqrt(det g) g^{-1} at x, in parameter coordinates.
inline Eigen::Matrix2d metric_coefficient(const BenchmarkGeometry& g, const Eigen::Vector2d& x) {
    const double r = x.norm();
    if (r < 1e-300) return Eigen::Matrix2d::Identity();
    const double ratio = g.jacobian_ratio(r);  // J(r)/r
    const Eigen::Vector2d er = x / r;
    const Eigen::Vector2d et(-er.y(), er.x());
    return ratio * er * er.transpose() + (1.0 / ratio) * et * et.transpose();
}

inline SparseMatrix restrict_to(const std::vector<Triplet>& entries, int n) {
    SparseMatrix m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return m;
}

}  // namespace detail

/// P1 assembly with mid-edge quadrature for the alpha and metric coefficients.
inline DiscreteForm assemble(std::shared_ptr<const TriMesh> mesh, const BenchmarkGeometry& g, const WeightPair& w,
                             const AssemblyOptions& opt = {}) {
    require(mesh != nullptr, "assemble needs a mesh");
    const TriMesh& m = *mesh;
    const int n = static_cast<int>(m.num_vertices());
    require(n >= 4 && !m.boundary_edges.empty(), "mesh has no interior or no boundary");

    std::vector<Triplet> k_int, m_int, k_bd, m_bd;
    k_int.reserve(9 * m.num_triangles());
    m_int.reserve(9 * m.num_triangles());

    for (const auto& t : m.triangles) {
        const double area = m.signed_area(t);
        if (!(area > kMinTriangleArea)) {
            std::ostringstream msg;
            msg << "degenerate triangle (" << t[0] << ", " << t[1] << ", " << t[2] << ") with area " << area;
            throw DomainError(msg.str());
        }
        const Eigen::Vector2d& p0 = m.vertices[t[0]];
        const Eigen::Vector2d& p1 = m.vertices[t[1]];
        const Eigen::Vector2d& p2 = m.vertices[t[2]];
        // gradients of the barycentric coordinates
        std::array<Eigen::Vector2d, 3> grad;
        grad[0] = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / (2 * area);
        grad[1] = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / (2 * area);
        grad[2] = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / (2 * area);

        Eigen::Matrix2d coef = Eigen::Matrix2d::Zero();
        Eigen::Matrix3d mass = Eigen::Matrix3d::Zero();
        for (int q = 0; q < 3; ++q) {
            // midpoint of the edge opposite vertex q
            const Eigen::Vector2d x = 0.5 * (m.vertices[t[(q + 1) % 3]] + m.vertices[t[(q + 2) % 3]]);
            const double r = x.norm();
            const double a = w.alpha.value(r);
            coef += a * detail::metric_coefficient(g, x);
            const double density = a * g.jacobian_ratio(r) * area / 3.0;
            Eigen::Vector3d phi = Eigen::Vector3d::Constant(0.5);
            phi(q) = 0.0;
            if (opt.lumped_interior)  // row sums, barycentric coordinates sum to 1
                mass.diagonal() += density * phi;
            else
                mass += density * phi * phi.transpose();
        }
        coef *= area / 3.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                k_int.emplace_back(t[i], t[j], grad[i].dot(coef * grad[j]));
                if (mass(i, j) != 0.0) m_int.emplace_back(t[i], t[j], mass(i, j));
            }
    }
    const double r0 = g.inradius();
    const double stretch = g.jacobian(r0) / r0;  // boundary length element per parameter length
    const double beta0 = w.beta.value(r0);
    for (const auto& e : m.boundary_edges) {
        const double len = (m.vertices[e[1]] - m.vertices[e[0]]).norm();
        require(len > 0.0, "zero-length boundary edge");
        const double half_mass = 0.5 * beta0 * stretch * len;
        m_bd.emplace_back(e[0], e[0], half_mass);
        m_bd.emplace_back(e[1], e[1], half_mass);
        const double s = beta0 / (stretch * len);
        k_bd.emplace_back(e[0], e[0], s);
        k_bd.emplace_back(e[1], e[1], s);
        k_bd.emplace_back(e[0], e[1], -s);
        k_bd.emplace_back(e[1], e[0], -s);
    }

    DiscreteForm f;
    f.K_int = detail::restrict_to(k_int, n);
    f.M_int = detail::restrict_to(m_int, n);
    f.K_bd = detail::restrict_to(k_bd, n);
    f.M_bd = detail::restrict_to(m_bd, n);
    f.boundary = m.boundary_vertices;
    f.mesh = std::move(mesh);
    f.lumped_interior = opt.lumped_interior;

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const double mass_a = ones.dot(f.M_int * ones);
    const double mass_b = ones.dot(f.M_bd * ones);
    if (opt.normalize) {
        // same common factor on every matrix keeps the Dirichlet form and
        // measure consistent with mu being a probability measure
        f.normalization = 1.0 / (mass_a + mass_b);
        f.K_int *= f.normalization;
        f.K_bd *= f.normalization;
        f.M_int *= f.normalization;
        f.M_bd *= f.normalization;
    }
    f.A = mass_a * f.normalization;
    f.B = mass_b * f.normalization;
    return f;
}

inline DiscreteForm assemble(const TriMesh& mesh, const BenchmarkGeometry& g, const WeightPair& w,
                             const AssemblyOptions& opt = {}) {
    return assemble(std::make_shared<const TriMesh>(mesh), g, w, opt);
}

/// Principal submatrix on the given index set.
inline SparseMatrix submatrix(const SparseMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    std::vector<int> col_pos(m.cols(), -1), row_pos(m.rows(), -1);
    for (std::size_t j = 0; j < cols.size(); ++j) col_pos[cols[j]] = static_cast<int>(j);
    for (std::size_t i = 0; i < rows.size(); ++i) row_pos[rows[i]] = static_cast<int>(i);
    std::vector<Triplet> out;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            if (row_pos[it.row()] >= 0 && col_pos[it.col()] >= 0)
                out.emplace_back(row_pos[it.row()], col_pos[it.col()], it.value());
    SparseMatrix s(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    s.setFromTriplets(out.begin(), out.end());
    s.makeCompressed();
    return s;
}

inline std::vector<int> interior_indices(const DiscreteForm& f) {
    std::vector<int> out;
    const auto& pos = f.mesh->boundary_position;
    for (int i = 0; i < f.size(); ++i)
        if (pos[i] < 0) out.push_back(i);
    return out;
}

}  // namespace sticky::spectral
