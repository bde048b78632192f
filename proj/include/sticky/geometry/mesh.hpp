#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sticky/error.hpp"
#include "sticky/geometry/benchmark.hpp"
#include "sticky/numerics.hpp"

namespace sticky {

/// Conforming triangulation of the parameter disk |x| <= inradius of a
/// benchmark geometry. Vertex coordinates are geodesic polar coordinates
/// (x, y) = r (cos theta, sin theta); the intrinsic metric enters only
/// through the element matrices.
struct TriMesh {
    std::vector<Eigen::Vector2d> vertices;
    std::vector<std::array<int, 3>> triangles;         ///< counter-clockwise
    std::vector<std::array<int, 2>> boundary_edges;    ///< counter-clockwise loop
    std::vector<int> boundary_vertices;                ///< loop order
    std::vector<int> boundary_position;                ///< vertex -> loop index or -1
    double h = 0.0;
    double radius = 0.0;

    std::size_t num_vertices() const { return vertices.size(); }
    std::size_t num_triangles() const { return triangles.size(); }

    std::size_t num_edges() const {
        std::set<std::pair<int, int>> edges;
        for (const auto& t : triangles)
            for (int k = 0; k < 3; ++k) {
                int a = t[k], b = t[(k + 1) % 3];
                if (a > b) std::swap(a, b);
                edges.emplace(a, b);
            }
        return edges.size();
    }

    long euler_characteristic() const {
        return static_cast<long>(num_vertices()) - static_cast<long>(num_edges()) +
               static_cast<long>(num_triangles());
    }

    double signed_area(const std::array<int, 3>& t) const {
        const Eigen::Vector2d e1 = vertices[t[1]] - vertices[t[0]];
        const Eigen::Vector2d e2 = vertices[t[2]] - vertices[t[0]];
        return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
    }
};

inline constexpr std::size_t kDefaultDofCap = 200000;

namespace detail {

inline void finish_boundary(TriMesh& m) {
    m.boundary_position.assign(m.vertices.size(), -1);
    for (std::size_t i = 0; i < m.boundary_vertices.size(); ++i) m.boundary_position[m.boundary_vertices[i]] = int(i);
}

}  // namespace detail

/// Ring mesh: concentric circles at spacing ~h, each carrying round(2 pi r / h)
/// equally spaced vertices, consecutive rings stitched by an angular merge.
inline TriMesh mesh(const BenchmarkGeometry& g, double h, std::size_t dof_cap = kDefaultDofCap) {
    const double r0 = g.inradius();
    require(h > 0.0 && h < r0, "mesh size must satisfy 0 < h < inradius");
    const double estimate = 1.2 * numerics::kPi * r0 * r0 / (h * h);
    if (estimate > double(dof_cap)) {
        std::ostringstream msg;
        msg << "mesh size h = " << h << " needs about " << std::size_t(estimate) << " vertices, above the cap "
            << dof_cap;
        throw DomainError(msg.str());
    }

    TriMesh m;
    m.h = h;
    m.radius = r0;
    const int rings = std::max(1, int(std::lround(r0 / h)));
    m.vertices.emplace_back(0.0, 0.0);

    std::vector<int> inner{0};
    std::vector<double> inner_angle{0.0};
    for (int k = 1; k <= rings; ++k) {
        const double r = r0 * k / rings;
        const int count = std::max(3, int(std::lround(2.0 * numerics::kPi * r / h)));
        const double offset = (k % 2 == 0) ? numerics::kPi / count : 0.0;
        std::vector<int> outer(count);
        std::vector<double> outer_angle(count);
        for (int j = 0; j < count; ++j) {
            const double a = offset + 2.0 * numerics::kPi * j / count;
            outer[j] = int(m.vertices.size());
            outer_angle[j] = a;
            m.vertices.emplace_back(r * std::cos(a), r * std::sin(a));
        }
        if (inner.size() == 1) {
            for (int j = 0; j < count; ++j) m.triangles.push_back({inner[0], outer[j], outer[(j + 1) % count]});
        } else {
            // Merge the two angular sequences; each step closes one triangle.
            const int ni = int(inner.size());
            auto ia = [&](int i) { return inner_angle[i % ni] + 2.0 * numerics::kPi * (i / ni); };
            auto oa = [&](int j) { return outer_angle[j % count] + 2.0 * numerics::kPi * (j / count); };
            int i = 0, j = 0;
            while (i < ni || j < count) {
                const bool advance_outer = (j < count) && (i == ni || oa(j + 1) <= ia(i + 1));
                if (advance_outer) {
                    m.triangles.push_back({inner[i % ni], outer[j % count], outer[(j + 1) % count]});
                    ++j;
                } else {
                    m.triangles.push_back({inner[i % ni], outer[j % count], inner[(i + 1) % ni]});
                    ++i;
                }
            }
        }
        inner = std::move(outer);
        inner_angle = std::move(outer_angle);
    }
    m.boundary_vertices = inner;
    for (std::size_t j = 0; j < inner.size(); ++j)
        m.boundary_edges.push_back({inner[j], inner[(j + 1) % inner.size()]});
    detail::finish_boundary(m);
    for (const auto& t : m.triangles)
        if (!(m.signed_area(t) > 1e-14)) throw DomainError("ring mesh produced a degenerate triangle");
    return m;
}

/// Uniform red refinement: every triangle split into four, new boundary
/// vertices projected back onto the boundary circle.
inline TriMesh refine(const TriMesh& coarse, std::size_t dof_cap = kDefaultDofCap) {
    TriMesh m;
    m.h = 0.5 * coarse.h;
    m.radius = coarse.radius;
    m.vertices = coarse.vertices;
    std::map<std::pair<int, int>, int> midpoint;
    std::set<std::pair<int, int>> on_boundary;
    for (const auto& e : coarse.boundary_edges) on_boundary.emplace(std::min(e[0], e[1]), std::max(e[0], e[1]));

    auto mid = [&](int a, int b) {
        const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
        if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
        Eigen::Vector2d p = 0.5 * (coarse.vertices[a] + coarse.vertices[b]);
        if (on_boundary.count(key)) p *= coarse.radius / p.norm();
        const int id = int(m.vertices.size());
        m.vertices.push_back(p);
        midpoint.emplace(key, id);
        return id;
    };
    for (const auto& t : coarse.triangles) {
        const int a = t[0], b = t[1], c = t[2];
        const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        m.triangles.push_back({a, ab, ca});
        m.triangles.push_back({ab, b, bc});
        m.triangles.push_back({ca, bc, c});
        m.triangles.push_back({ab, bc, ca});
    }
    if (m.vertices.size() > dof_cap) throw DomainError("refined mesh exceeds the vertex cap");
    for (const auto& e : coarse.boundary_edges) {
        const int c = mid(e[0], e[1]);
        m.boundary_edges.push_back({e[0], c});
        m.boundary_edges.push_back({c, e[1]});
    }
    for (const auto& e : m.boundary_edges) m.boundary_vertices.push_back(e[0]);
    detail::finish_boundary(m);
    for (const auto& t : m.triangles)
        if (!(m.signed_area(t) > 1e-14)) throw DomainError("refinement produced a degenerate triangle");
    return m;
}

/// Intrinsic area of the triangulated region (metric factor J(r)/r, mid-edge rule).
inline double mesh_area(const TriMesh& m, const BenchmarkGeometry& g) {
    double total = 0.0;
    for (const auto& t : m.triangles) {
        const double area = m.signed_area(t);
        double density = 0.0;
        for (int k = 0; k < 3; ++k) {
            const Eigen::Vector2d p = 0.5 * (m.vertices[t[k]] + m.vertices[t[(k + 1) % 3]]);
            density += g.jacobian_ratio(p.norm()) / 3.0;
        }
        total += area * density;
    }
    return total;
}

/// Intrinsic length of the boundary polygon.
inline double mesh_boundary_length(const TriMesh& m, const BenchmarkGeometry& g) {
    double total = 0.0;
    const double factor = g.jacobian(m.radius) / m.radius;
    for (const auto& e : m.boundary_edges) total += (m.vertices[e[1]] - m.vertices[e[0]]).norm() * factor;
    return total;
}

}  // namespace sticky
