#include "zernike/domains.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace zernike {

namespace {

constexpr double kOriginTolerance = 1e-14;

void require_finite_positive(double value, const char* name) {
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw std::invalid_argument(std::string(name) + " must be finite and positive");
    }
}

}  // namespace

double r_alpha(double theta, double alpha) {
    const double sector = std::floor((theta + alpha) / (2.0 * alpha));
    const double reduced = theta - sector * 2.0 * alpha;
    return std::cos(alpha) / std::cos(reduced);
}

std::string_view to_string(DomainKind kind) {
    switch (kind) {
        case DomainKind::Disk: return "disk";
        case DomainKind::Hexagon: return "hexagon";
        case DomainKind::Ellipse: return "ellipse";
        case DomainKind::Annulus: return "annulus";
    }
    return "unknown";
}

DomainMap DomainMap::disk() { return {DomainKind::Disk, 1.0, 1.0}; }

DomainMap DomainMap::hexagon() { return {DomainKind::Hexagon, 1.0, 1.0}; }

DomainMap DomainMap::ellipse(double semi_major, double semi_minor) {
    require_finite_positive(semi_major, "ellipse semi-major axis A");
    require_finite_positive(semi_minor, "ellipse semi-minor axis B");
    if (semi_minor > semi_major) throw std::invalid_argument("ellipse requires A >= B");
    return {DomainKind::Ellipse, semi_major, semi_minor};
}

DomainMap DomainMap::annulus(double inner, double outer) {
    require_finite_positive(inner, "annulus inner radius a");
    require_finite_positive(outer, "annulus outer radius A");
    if (!(inner < outer)) throw std::invalid_argument("annulus requires a < A");
    return {DomainKind::Annulus, inner, outer};
}

Point2 DomainMap::forward(Point2 p) const {
    switch (kind_) {
        case DomainKind::Disk: return p;
        case DomainKind::Hexagon: {
            const PolarPoint polar = to_polar(p);
            return to_cartesian({polar.rho * r_alpha(polar.theta, kHexagonHalfAngle), polar.theta});
        }
        case DomainKind::Ellipse: return {p1_ * p.x, p2_ * p.y};
        case DomainKind::Annulus: {
            // (rho, theta) are the polar coordinates of the disk point; the origin takes theta = 0.
            const PolarPoint polar = to_polar(p);
            const double h = ratio();
            return to_cartesian({p2_ * (h + (1.0 - h) * polar.rho), polar.theta});
        }
    }
    return p;
}

bool DomainMap::contains(Point2 p, double tolerance) const {
    switch (kind_) {
        case DomainKind::Disk: return std::hypot(p.x, p.y) <= 1.0 + tolerance;
        case DomainKind::Hexagon: {
            const PolarPoint polar = to_polar(p);
            return polar.rho <= r_alpha(polar.theta, kHexagonHalfAngle) + tolerance;
        }
        case DomainKind::Ellipse: return std::hypot(p.x / p1_, p.y / p2_) <= 1.0 + tolerance;
        case DomainKind::Annulus: {
            const double rho = std::hypot(p.x, p.y);
            return rho >= p1_ - tolerance && rho <= p2_ + tolerance;
        }
    }
    return false;
}

Point2 DomainMap::inverse(Point2 p) const {
    if (!contains(p)) {
        std::ostringstream msg;
        msg << "point (" << p.x << ", " << p.y << ") lies outside the " << describe();
        throw OutsideDomainError(msg.str());
    }
    switch (kind_) {
        case DomainKind::Disk: return p;
        case DomainKind::Hexagon: {
            const PolarPoint polar = to_polar(p);
            return to_cartesian({polar.rho / r_alpha(polar.theta, kHexagonHalfAngle), polar.theta});
        }
        case DomainKind::Ellipse: return {p.x / p1_, p.y / p2_};
        case DomainKind::Annulus: {
            const PolarPoint polar = to_polar(p);
            // Clamp the slack admitted by contains() back onto [0, 1].
            const double s = std::clamp((polar.rho - p1_) / (p2_ - p1_), 0.0, 1.0);
            return to_cartesian({s, polar.theta});
        }
    }
    return p;
}

double DomainMap::inverse_jacobian(Point2 p) const {
    switch (kind_) {
        case DomainKind::Disk: return 1.0;
        case DomainKind::Hexagon: {
            const double r = r_alpha(to_polar(p).theta, kHexagonHalfAngle);
            return 1.0 / (r * r);
        }
        case DomainKind::Ellipse: return 1.0 / (p1_ * p2_);
        case DomainKind::Annulus: {
            const double rho = std::hypot(p.x, p.y);
            const double h = ratio();
            return std::max(rho - h * p2_, 0.0) / (rho * p2_ * p2_ * (1.0 - h) * (1.0 - h));
        }
    }
    return 1.0;
}

std::string DomainMap::describe() const {
    std::ostringstream out;
    switch (kind_) {
        case DomainKind::Disk: out << "unit disk"; break;
        case DomainKind::Hexagon: out << "unit hexagon"; break;
        case DomainKind::Ellipse: out << "ellipse(A=" << p1_ << ", B=" << p2_ << ")"; break;
        case DomainKind::Annulus: out << "annulus(a=" << p1_ << ", A=" << p2_ << ")"; break;
    }
    return out.str();
}

std::string_view to_string(Family family) {
    switch (family) {
        case Family::Z: return "Z";
        case Family::K: return "K";
        case Family::H: return "H";
        case Family::E: return "E";
        case Family::O: return "O";
        case Family::C: return "C";
    }
    return "?";
}

bool family_valid_for(Family family, DomainKind kind) {
    switch (family) {
        case Family::Z: return kind == DomainKind::Disk;
        case Family::K:
        case Family::H: return kind == DomainKind::Hexagon;
        case Family::E: return kind == DomainKind::Ellipse;
        case Family::O:
        case Family::C: return kind == DomainKind::Annulus;
    }
    return false;
}

TransferredBasis::TransferredBasis(DomainMap map, Family family) : map_(map), family_(family) {
    if (!family_valid_for(family, map.kind())) {
        throw std::invalid_argument("basis family " + std::string(to_string(family)) + " is not defined on the " +
                                    map.describe());
    }
}

double TransferredBasis::q(Point2 p) const {
    switch (family_) {
        case Family::Z:
        case Family::K:
        case Family::C: return 1.0;
        case Family::H: return 1.0 / r_alpha(to_polar(p).theta, kHexagonHalfAngle);
        case Family::E: return 1.0 / std::sqrt(map_.A() * map_.B());
        case Family::O: return std::sqrt(map_.inverse_jacobian(p));
    }
    return 1.0;
}

double TransferredBasis::measure_weight(Point2 p) const {
    switch (family_) {
        case Family::Z:
        case Family::H:
        case Family::E:
        case Family::O: return 1.0;
        case Family::K:
        case Family::C: return map_.inverse_jacobian(p);
    }
    return 1.0;
}

double TransferredBasis::eval(int j, Point2 p) const {
    const Point2 source = map_.inverse(p);
    const double factor = q(p);
    if (factor == 0.0) return 0.0;
    return factor * zernike(j, source);
}

void TransferredBasis::eval_all(Point2 p, std::span<double> out) const {
    const Point2 source = map_.inverse(p);
    const double factor = q(p);
    zernike_all(source, out);
    if (factor == 1.0) return;
    for (auto& value : out) value = (factor == 0.0) ? 0.0 : factor * value;
}

NodeSet transfer_nodes(const DomainMap& map, const NodeSet& disk_nodes, double annulus_epsilon) {
    if (annulus_epsilon < 0.0) throw std::invalid_argument("annulus epsilon must be non-negative");
    if (map.kind() == DomainKind::Annulus && map.inner_radius() + annulus_epsilon > map.outer_radius()) {
        throw std::invalid_argument("annulus epsilon pushes nodes past the outer radius");
    }
    NodeSet result = disk_nodes;
    result.metadata = disk_nodes.metadata.empty() ? map.describe() : disk_nodes.metadata + " -> " + map.describe();
    for (auto& node : result.nodes) {
        const bool at_origin = std::hypot(node.x, node.y) <= kOriginTolerance;
        const Point2 mapped = map.forward(node);
        if (map.kind() == DomainKind::Annulus && at_origin && annulus_epsilon > 0.0) {
            const double theta = to_polar(node).theta;
            node = to_cartesian({map.inner_radius() + annulus_epsilon, theta});
        } else {
            node = mapped;
        }
    }
    return result;
}

}  // namespace zernike
