#pragma once

#include <cmath>
#include <string>

#include "sticky/error.hpp"
#include "sticky/geometry/curvature.hpp"
#include "sticky/numerics.hpp"

namespace sticky {

enum class GeometryKind { FlatDisk, SphericalCap, HyperbolicDisk };

inline std::string to_string(GeometryKind kind) {
    switch (kind) {
        case GeometryKind::FlatDisk: return "flat_disk";
        case GeometryKind::SphericalCap: return "spherical_cap";
        case GeometryKind::HyperbolicDisk: return "hyperbolic_disk";
    }
    return "unknown";
}

/// Descriptor as read from configuration: the kind and its single size
/// parameter (radius R, or geodesic radius theta0 of the cap on the unit sphere).
struct GeometrySpec {
    GeometryKind kind = GeometryKind::FlatDisk;
    double parameter = 1.0;
};

/// A rotationally symmetric two-dimensional manifold with one boundary circle,
/// written in geodesic polar coordinates around its center:
///   ds^2 = dr^2 + J(r)^2 dtheta^2,  r in [0, inradius],
/// with J(r) = r, sin r or sinh r. The distance to the boundary is
/// rho = inradius - r.
class BenchmarkGeometry {
public:
    static BenchmarkGeometry flat_disk(double radius) {
        require(radius > 0.0 && std::isfinite(radius), "flat disk radius must be positive");
        return BenchmarkGeometry(GeometryKind::FlatDisk, radius);
    }
    static BenchmarkGeometry spherical_cap(double theta0) {
        require(theta0 > 0.0, "spherical cap radius must be positive");
        require(theta0 < numerics::kPi, "spherical cap needs theta0 < pi so the boundary is nonempty");
        return BenchmarkGeometry(GeometryKind::SphericalCap, theta0);
    }
    static BenchmarkGeometry hyperbolic_disk(double radius) {
        require(radius > 0.0 && std::isfinite(radius), "hyperbolic disk radius must be positive");
        return BenchmarkGeometry(GeometryKind::HyperbolicDisk, radius);
    }

    GeometryKind kind() const { return kind_; }
    double parameter() const { return r0_; }
    int dimension() const { return 2; }
    double inradius() const { return r0_; }

    /// Constant sectional curvature: 0, +1 or -1.
    double sectional() const {
        switch (kind_) {
            case GeometryKind::FlatDisk: return 0.0;
            case GeometryKind::SphericalCap: return 1.0;
            case GeometryKind::HyperbolicDisk: return -1.0;
        }
        return 0.0;
    }

    /// Principal curvature of the boundary circle (II = value * id), w.r.t. the outward normal.
    double boundary_curvature() const { return jacobian_slope(r0_) / jacobian(r0_); }

    /// J(r): circumference of the geodesic circle of radius r divided by 2 pi.
    double jacobian(double r) const {
        switch (kind_) {
            case GeometryKind::FlatDisk: return r;
            case GeometryKind::SphericalCap: return std::sin(r);
            case GeometryKind::HyperbolicDisk: return std::sinh(r);
        }
        return r;
    }
    double jacobian_slope(double r) const {
        switch (kind_) {
            case GeometryKind::FlatDisk: return 1.0;
            case GeometryKind::SphericalCap: return std::cos(r);
            case GeometryKind::HyperbolicDisk: return std::cosh(r);
        }
        return 1.0;
    }
    /// J(r)/r, smooth through the center.
    double jacobian_ratio(double r) const {
        if (kind_ == GeometryKind::FlatDisk) return 1.0;
        if (std::abs(r) < 1e-4) {
            const double r2 = r * r;
            return kind_ == GeometryKind::SphericalCap ? 1.0 - r2 / 6.0 + r2 * r2 / 120.0
                                                       : 1.0 + r2 / 6.0 + r2 * r2 / 120.0;
        }
        return jacobian(r) / r;
    }

    double volume() const {
        switch (kind_) {
            case GeometryKind::FlatDisk: return numerics::kPi * r0_ * r0_;
            case GeometryKind::SphericalCap: return 2.0 * numerics::kPi * (1.0 - std::cos(r0_));
            case GeometryKind::HyperbolicDisk: return 2.0 * numerics::kPi * (std::cosh(r0_) - 1.0);
        }
        return 0.0;
    }
    double boundary_length() const { return 2.0 * numerics::kPi * jacobian(r0_); }

    /// Exact curvature data; the comparison estimates are equalities here.
    CurvatureBounds curvature() const {
        CurvatureBounds c;
        c.d = 2;
        c.k1 = c.k2 = sectional();
        c.gamma1 = c.gamma2 = boundary_curvature();
        return c;
    }

    std::string name() const { return to_string(kind_); }

private:
    BenchmarkGeometry(GeometryKind kind, double r0) : kind_(kind), r0_(r0) {}

    GeometryKind kind_;
    double r0_;
};

inline BenchmarkGeometry make_geometry(const GeometrySpec& spec) {
    switch (spec.kind) {
        case GeometryKind::FlatDisk: return BenchmarkGeometry::flat_disk(spec.parameter);
        case GeometryKind::SphericalCap: return BenchmarkGeometry::spherical_cap(spec.parameter);
        case GeometryKind::HyperbolicDisk: return BenchmarkGeometry::hyperbolic_disk(spec.parameter);
    }
    throw DomainError("unknown geometry kind");
}

}  // namespace sticky
