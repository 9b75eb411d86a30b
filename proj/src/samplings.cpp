#include "zernike/samplings.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "zernike/rng.hpp"

namespace zernike {

namespace {

constexpr double kGoldenAngle = 2.39996322972865332;
constexpr double kDiskTolerance = 1e-9;

void require_order(int n, int minimum) {
    if (n < minimum) throw std::invalid_argument("node order must be >= " + std::to_string(minimum));
}

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

Eigen::MatrixXd zernike_vandermonde(int n, const std::vector<Point2>& points) {
    const auto size = basis_size(n);
    Eigen::MatrixXd v(size, points.size());
    for (std::size_t c = 0; c < points.size(); ++c) {
        zernike_all(points[c], std::span<double>(v.col(static_cast<Eigen::Index>(c)).data(), size));
    }
    return v;
}

}  // namespace

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::OCS: return "ocs";
        case Scheme::Carnicer: return "carnicer";
        case Scheme::Cuyt: return "cuyt";
        case Scheme::BosCustom: return "bos";
        case Scheme::Spiral: return "spiral";
        case Scheme::RandomThinned: return "random";
        case Scheme::ApproxFekete: return "afp";
        case Scheme::FileLoaded: return "file";
    }
    return "unknown";
}

std::vector<int> bos_ring_counts(int order) {
    require_order(order, 0);
    std::vector<int> counts;
    for (int j = 1; j <= order / 2 + 1; ++j) counts.push_back(2 * order - 4 * j + 5);
    return counts;
}

NodeSet bos_array(const BosArraySpec& layout, Scheme scheme) {
    const auto counts = bos_ring_counts(layout.order);
    if (layout.radii.size() != counts.size()) {
        throw std::invalid_argument("Bos array of order " + std::to_string(layout.order) + " needs " +
                                    std::to_string(counts.size()) + " radii, got " +
                                    std::to_string(layout.radii.size()));
    }
    if (!layout.offsets.empty() && layout.offsets.size() != counts.size()) {
        throw std::invalid_argument("Bos array offsets must match the ring count");
    }
    std::size_t total = 0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] <= 0) throw std::invalid_argument("non-positive ring count");
        total += static_cast<std::size_t>(counts[j]);
        if (layout.radii[j] < 0.0 || layout.radii[j] > 1.0 + 1e-12) {
            throw std::invalid_argument("Bos array radius outside [0, 1]");
        }
        if (j > 0 && !(layout.radii[j] < layout.radii[j - 1])) {
            throw std::invalid_argument("Bos array radii must be strictly decreasing");
        }
        if (layout.radii[j] == 0.0 && counts[j] != 1) {
            throw std::invalid_argument("only a single-point ring may sit at the origin");
        }
    }
    if (total != basis_size(layout.order)) throw std::invalid_argument("ring counts do not sum to N");

    NodeSet set{layout.order, scheme, {}, "bos array"};
    set.nodes.reserve(total);
    for (std::size_t j = 0; j < counts.size(); ++j) {
        const double radius = layout.radii[j];
        const double offset = layout.offsets.empty() ? 0.0 : layout.offsets[j];
        for (int i = 0; i < counts[j]; ++i) {
            if (radius == 0.0) {
                set.nodes.push_back({0.0, 0.0});
                continue;
            }
            const double angle = offset + 2.0 * std::numbers::pi * i / counts[j];
            set.nodes.push_back({radius * std::cos(angle), radius * std::sin(angle)});
        }
    }
    return set;
}

std::vector<double> ocs_radii(int n) {
    require_order(n, 0);
    const int rings = n / 2 + 1;
    std::vector<double> radii;
    radii.reserve(rings);
    for (int j = 1; j <= rings; ++j) {
        if (2 * j - 1 == n + 1) {
            radii.push_back(0.0);
            continue;
        }
        const double xi = std::cos((2 * j - 1) * std::numbers::pi / (2.0 * (n + 1)));
        radii.push_back(1.1565 * xi - 0.76535 * xi * xi + 0.60517 * xi * xi * xi);
    }
    return radii;
}

std::vector<double> carnicer_radii(int n, double exponent) {
    require_order(n, 1);
    if (!(exponent > 0.0)) throw std::invalid_argument("Carnicer exponent must be positive");
    const int rings = n / 2 + 1;
    std::vector<double> radii;
    radii.reserve(rings);
    for (int j = 1; j <= rings; ++j) radii.push_back(1.0 - std::pow(2.0 * (j - 1) / n, exponent));
    return radii;
}

std::pair<double, double> legendre_with_derivative(int degree, double x) {
    if (degree < 0) throw std::invalid_argument("negative Legendre degree");
    if (degree == 0) return {1.0, 0.0};
    double previous = 1.0;
    double current = x;
    for (int k = 2; k <= degree; ++k) {
        const double next = ((2.0 * k - 1.0) * x * current - (k - 1.0) * previous) / k;
        previous = current;
        current = next;
    }
    // (1 - x^2) P_d' = d (P_{d-1} - x P_d), singular only at x = +-1.
    if (std::abs(x) == 1.0) {
        const double sign = (x < 0.0 && degree % 2 == 0) ? -1.0 : 1.0;
        return {current, sign * 0.5 * degree * (degree + 1.0)};
    }
    return {current, degree * (previous - x * current) / (1.0 - x * x)};
}

std::vector<double> legendre_zeros(int degree) {
    require_order(degree, 1);
    constexpr int kMaxIterations = 100;
    std::vector<double> zeros(static_cast<std::size_t>(degree));
    const int half = degree / 2;
    for (int i = 0; i < half; ++i) {
        // Descending positive zeros; guess from the asymptotic cos(pi (i + 3/4) / (d + 1/2)).
        double x = std::cos(std::numbers::pi * (i + 0.75) / (degree + 0.5));
        bool converged = false;
        for (int it = 0; it < kMaxIterations; ++it) {
            const auto [p, dp] = legendre_with_derivative(degree, x);
            const double step = p / dp;
            x -= step;
            if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon()) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            // A final step below 1e-15 still leaves |P_d| well under 1e-12.
            const auto [p, dp] = legendre_with_derivative(degree, x);
            if (!(std::abs(p / dp) < 1e-14)) {
                throw std::runtime_error("Legendre zero iteration did not converge for degree " +
                                         std::to_string(degree));
            }
        }
        zeros[static_cast<std::size_t>(degree - 1 - i)] = x;
        zeros[static_cast<std::size_t>(i)] = -x;
    }
    if (degree % 2 == 1) zeros[static_cast<std::size_t>(half)] = 0.0;
    return zeros;
}

std::vector<double> legendre_derivative_zeros(int degree) {
    require_order(degree, 2);
    // Zeros of P_d' interlace those of P_d, one per gap. Newton on P_d' with
    // P_d'' = (2x P_d' - d(d+1) P_d) / (1 - x^2), safeguarded by bisection on the gap.
    const auto bracket = legendre_zeros(degree);
    std::vector<double> zeros(bracket.size() - 1);
    const auto derivative_at = [degree](double x) { return legendre_with_derivative(degree, x).second; };
    for (std::size_t i = 0; i + 1 < bracket.size(); ++i) {
        double lo = bracket[i];
        double hi = bracket[i + 1];
        if (degree % 2 == 0 && lo < 0.0 && hi > 0.0) {
            zeros[i] = 0.0;  // odd P_d' vanishes at the origin
            continue;
        }
        double f_lo = derivative_at(lo);
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
            const auto [p, dp] = legendre_with_derivative(degree, x);
            if (dp == 0.0) break;
            if ((dp > 0.0) == (f_lo > 0.0)) {
                lo = x;
                f_lo = dp;
            } else {
                hi = x;
            }
            const double second = (2.0 * x * dp - degree * (degree + 1.0) * p) / (1.0 - x * x);
            double next = x - dp / second;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            const double step = std::abs(next - x);
            x = next;
            if (step <= 4.0 * std::numeric_limits<double>::epsilon() || hi - lo <= 1e-16) break;
        }
        zeros[i] = x;
    }
    // Enforce exact antisymmetry.
    for (std::size_t i = 0; i < zeros.size() / 2; ++i) {
        const double magnitude = 0.5 * (zeros[zeros.size() - 1 - i] - zeros[i]);
        zeros[i] = -magnitude;
        zeros[zeros.size() - 1 - i] = magnitude;
    }
    return zeros;
}

std::vector<double> cuyt_radii(int n) {
    require_order(n, 1);
    std::vector<double> radii{1.0};
    if (n >= 2) {
        const auto interior = legendre_derivative_zeros(n);
        for (auto it = interior.rbegin(); it != interior.rend() && *it >= 0.0; ++it) radii.push_back(*it);
    }
    return radii;
}

NodeSet ocs_nodes(int n) {
    auto set = bos_array({n, ocs_radii(n), {}}, Scheme::OCS);
    set.metadata = "optimal concentric sampling";
    return set;
}

NodeSet carnicer_nodes(int n, double exponent) {
    auto set = bos_array({n, carnicer_radii(n, exponent), {}}, Scheme::Carnicer);
    set.metadata = "carnicer radii, a=" + format_double(exponent);
    return set;
}

NodeSet cuyt_nodes(int n) {
    auto set = bos_array({n, cuyt_radii(n), {}}, Scheme::Cuyt);
    set.metadata = "cuyt radii (Gauss-Lobatto-Legendre)";
    return set;
}

NodeSet spiral_nodes(int n) {
    require_order(n, 1);
    const auto count = basis_size(n);
    NodeSet set{n, Scheme::Spiral, {}, "vogel spiral"};
    set.nodes.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        const double radius = std::sqrt((static_cast<double>(i) - 0.5) / static_cast<double>(count));
        const double angle = static_cast<double>(i) * kGoldenAngle;
        set.nodes.push_back({radius * std::cos(angle), radius * std::sin(angle)});
    }
    return set;
}

NodeSet random_thinned_nodes(int n, std::uint64_t seed) {
    require_order(n, 0);
    const auto count = basis_size(n);
    if (count > kThinningCandidates) {
        throw std::invalid_argument("order " + std::to_string(n) + " needs more nodes than the " +
                                    std::to_string(kThinningCandidates) + " thinning candidates");
    }
    Xoshiro256 rng(seed);
    std::vector<Point2> candidates;
    candidates.reserve(kThinningCandidates);
    for (std::size_t i = 0; i < kThinningCandidates; ++i) {
        const double radius = std::sqrt(rng.uniform());
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        candidates.push_back({radius * std::cos(angle), radius * std::sin(angle)});
    }

    std::size_t first = 0;
    double best_radius = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double r2 = candidates[i].x * candidates[i].x + candidates[i].y * candidates[i].y;
        if (r2 > best_radius) {
            best_radius = r2;
            first = i;
        }
    }

    std::vector<double> min_distance(candidates.size(), std::numeric_limits<double>::infinity());
    std::vector<bool> taken(candidates.size(), false);
    NodeSet set{n, Scheme::RandomThinned, {}, "farthest-point thinning, seed=" + std::to_string(seed)};
    set.nodes.reserve(count);
    std::size_t next = first;
    for (std::size_t k = 0; k < count; ++k) {
        taken[next] = true;
        const Point2 chosen = candidates[next];
        set.nodes.push_back(chosen);
        std::size_t farthest = next;
        double farthest_distance = -1.0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (taken[i]) continue;
            const double d = std::hypot(candidates[i].x - chosen.x, candidates[i].y - chosen.y);
            min_distance[i] = std::min(min_distance[i], d);
            if (min_distance[i] > farthest_distance) {
                farthest_distance = min_distance[i];
                farthest = i;
            }
        }
        next = farthest;
    }
    return set;
}

NodeSet approximate_fekete(int n, std::size_t mesh_density) {
    require_order(n, 0);
    const auto count = basis_size(n);
    if (mesh_density < 10 * count) {
        throw std::invalid_argument("approximate Fekete mesh needs at least 10 N points");
    }
    // Polar tensor mesh: origin plus rings at r = i / rings, i = 1..rings, each
    // with `spokes` equispaced angles.
    const auto rings = static_cast<std::size_t>(std::ceil(std::sqrt(mesh_density / 2.0)));
    const auto spokes = static_cast<std::size_t>(std::ceil(static_cast<double>(mesh_density) / rings));
    std::vector<Point2> mesh{{0.0, 0.0}};
    mesh.reserve(rings * spokes + 1);
    for (std::size_t i = 1; i <= rings; ++i) {
        const double radius = static_cast<double>(i) / static_cast<double>(rings);
        // Half-step stagger on alternate rings avoids radially aligned spokes.
        const double stagger = (i % 2 == 0) ? 0.5 : 0.0;
        for (std::size_t k = 0; k < spokes; ++k) {
            const double angle = 2.0 * std::numbers::pi * (static_cast<double>(k) + stagger) / spokes;
            mesh.push_back({radius * std::cos(angle), radius * std::sin(angle)});
        }
    }

    const Eigen::MatrixXd vandermonde = zernike_vandermonde(n, mesh);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vandermonde);
    if (qr.rank() < static_cast<Eigen::Index>(count)) {
        throw std::runtime_error("mesh Vandermonde is rank deficient (rank " + std::to_string(qr.rank()) +
                                 " < " + std::to_string(count) + ")");
    }
    NodeSet set{n, Scheme::ApproxFekete, {}, "approximate Fekete, mesh=" + std::to_string(mesh.size())};
    set.nodes.reserve(count);
    const auto& permutation = qr.colsPermutation().indices();
    for (std::size_t k = 0; k < count; ++k) {
        set.nodes.push_back(mesh[static_cast<std::size_t>(permutation[static_cast<Eigen::Index>(k)])]);
    }
    return set;
}

NodeSet generate_nodes(Scheme scheme, int n, std::uint64_t seed) {
    switch (scheme) {
        case Scheme::OCS: return ocs_nodes(n);
        case Scheme::Carnicer: return carnicer_nodes(n);
        case Scheme::Cuyt: return cuyt_nodes(n);
        case Scheme::Spiral: return spiral_nodes(n);
        case Scheme::RandomThinned: return random_thinned_nodes(n, seed);
        case Scheme::ApproxFekete: return approximate_fekete(n, std::max<std::size_t>(20 * basis_size(n), 4000));
        case Scheme::BosCustom:
        case Scheme::FileLoaded: break;
    }
    throw std::invalid_argument("scheme '" + std::string(to_string(scheme)) + "' has no generator");
}

NodeSet read_nodes(std::istream& in, int n, std::string source) {
    require_order(n, 0);
    NodeSet set{n, Scheme::FileLoaded, {}, std::move(source)};
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::vector<double> values;
        const char* cursor = line.data();
        const char* const end = line.data() + line.size();
        while (cursor < end) {
            while (cursor < end && (*cursor == ' ' || *cursor == '\t' || *cursor == ',' || *cursor == '\r')) {
                ++cursor;
            }
            if (cursor == end) break;
            double value = 0.0;
            const char* start = cursor + (*cursor == '+' ? 1 : 0);
            const auto result = std::from_chars(start, end, value);
            if (result.ec != std::errc{}) {
                throw NodeFileParseError(set.metadata + ":" + std::to_string(line_number) +
                                         ": cannot parse number");
            }
            values.push_back(value);
            cursor = result.ptr;
        }
        if (values.empty()) continue;
        if (values.size() != 2) {
            throw NodeFileParseError(set.metadata + ":" + std::to_string(line_number) + ": expected 'x y', got " +
                                     std::to_string(values.size()) + " values");
        }
        const Point2 p{values[0], values[1]};
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw NodeFileParseError(set.metadata + ":" + std::to_string(line_number) + ": non-finite value");
        }
        if (std::hypot(p.x, p.y) > 1.0 + kDiskTolerance) {
            throw NodeOutsideDiskError(set.metadata + ":" + std::to_string(line_number) +
                                       ": node lies outside the closed unit disk");
        }
        set.nodes.push_back(p);
    }
    if (set.nodes.size() != basis_size(n)) {
        throw NodeCountError(set.metadata + ": expected " + std::to_string(basis_size(n)) + " nodes for order " +
                             std::to_string(n) + ", found " + std::to_string(set.nodes.size()));
    }
    return set;
}

NodeSet load_nodes(const std::filesystem::path& path, int n) {
    std::ifstream in(path);
    if (!in) throw NodeFileError("cannot open node file " + path.string());
    return read_nodes(in, n, path.string());
}

void write_nodes(std::ostream& out, const NodeSet& set, std::string_view header) {
    out << "# scheme=" << to_string(set.scheme) << " order=" << set.order << " count=" << set.nodes.size() << '\n';
    if (!set.metadata.empty()) out << "# " << set.metadata << '\n';
    if (!header.empty()) out << "# " << header << '\n';
    for (const auto& p : set.nodes) out << format_double(p.x) << ' ' << format_double(p.y) << '\n';
}

}  // namespace zernike
