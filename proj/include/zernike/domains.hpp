#pragma once

// Diffeomorphisms phi from the unit disk onto a target domain M, and the
// orthonormal families obtained by composing Zernike polynomials with phi^-1.
//
// For a family Q_j = q * (Z_j o phi^-1), orthonormality on M holds under the
// measure (1/pi) |J| / q^2 dx dy, where J is the Jacobian of phi^-1:
//
//   family  domain   q                             measure weight |J|/q^2
//   Z       disk     1                             1
//   K       hexagon  1                             1 / R(theta)^2
//   H       hexagon  1 / R(theta)                  1
//   E       ellipse  1 / sqrt(AB)                  1
//   C       annulus  1                             (rho - a) / (rho A^2 (1-h)^2)
//   O       annulus  sqrt((rho - a) / (rho A^2 (1-h)^2))   1
//
// R(theta) is the hexagon boundary radius (see r_alpha), h = a / A.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "zernike/samplings.hpp"
#include "zernike/zernike.hpp"

namespace zernike {

class OutsideDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Boundary radius of the regular polygon with half-angle alpha, inscribed in
/// the unit circle with an edge midpoint at theta = 0: cos(alpha) / cos(U(theta)),
/// U(theta) = theta - floor((theta + alpha) / (2 alpha)) 2 alpha. Any real theta is accepted.
double r_alpha(double theta, double alpha);

inline constexpr double kHexagonHalfAngle = 3.14159265358979323846 / 6.0;

enum class DomainKind { Disk, Hexagon, Ellipse, Annulus };

std::string_view to_string(DomainKind kind);

class DomainMap {
public:
    static DomainMap disk();
    static DomainMap hexagon();
    /// Throws std::invalid_argument unless semi_major >= semi_minor > 0.
    static DomainMap ellipse(double semi_major, double semi_minor);
    /// Throws std::invalid_argument unless 0 < inner < outer.
    static DomainMap annulus(double inner, double outer);

    DomainKind kind() const { return kind_; }
    double A() const { return p1_; }
    double B() const { return p2_; }
    double inner_radius() const { return p1_; }
    double outer_radius() const { return p2_; }
    /// a / A for the annulus.
    double ratio() const { return kind_ == DomainKind::Annulus ? p1_ / p2_ : 0.0; }
    /// Annuli thinner than a/A = 0.95 are accepted but numerically fragile.
    bool near_degenerate() const { return kind_ == DomainKind::Annulus && ratio() > 0.95; }

    /// Disk -> M. Precondition: |p| <= 1 (not checked; callers pass disk nodes).
    Point2 forward(Point2 p) const;
    /// M -> disk. Throws OutsideDomainError for points outside the closed domain.
    Point2 inverse(Point2 p) const;
    /// Closed-domain test with a small absolute slack for boundary nodes.
    bool contains(Point2 p, double tolerance = 1e-12) const;
    /// |det D(phi^-1)| at a point of M.
    double inverse_jacobian(Point2 p) const;

    std::string describe() const;

private:
    DomainMap(DomainKind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}

    DomainKind kind_;
    double p1_;
    double p2_;
};

enum class Family { Z, K, H, E, O, C };

std::string_view to_string(Family family);
bool family_valid_for(Family family, DomainKind kind);

class TransferredBasis {
public:
    /// Throws std::invalid_argument when the family does not belong to the domain.
    TransferredBasis(DomainMap map, Family family);

    const DomainMap& map() const { return map_; }
    Family family() const { return family_; }

    /// Normalizing factor q at a point of M.
    double q(Point2 p) const;
    /// Weight w with respect to which the family is orthonormal: (1/pi) * integral_M Q_j Q_k w = delta.
    double measure_weight(Point2 p) const;

    /// Q_j(p). Throws OutsideDomainError if p is outside M.
    double eval(int j, Point2 p) const;
    /// Q_0..Q_{out.size()-1} at p.
    void eval_all(Point2 p, std::span<double> out) const;

private:
    DomainMap map_;
    Family family_;
};

inline constexpr double kDefaultAnnulusEpsilon = 0.01;

/// Pointwise forward map, preserving order. For an annulus, disk nodes at the
/// origin (|s| <= 1e-14) land on the inner circle, where the O family's q vanishes;
/// those nodes are pushed radially to radius a + epsilon. Pass epsilon = 0 to disable.
NodeSet transfer_nodes(const DomainMap& map, const NodeSet& disk_nodes,
                       double annulus_epsilon = kDefaultAnnulusEpsilon);

}  // namespace zernike
