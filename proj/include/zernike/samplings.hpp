#pragma once

// Interpolation node sets of order n on the closed unit disk. Every set holds
// exactly basis_size(n) points.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zernike/zernike.hpp"

namespace zernike {

enum class Scheme { OCS, Carnicer, Cuyt, BosCustom, Spiral, RandomThinned, ApproxFekete, FileLoaded };

std::string_view to_string(Scheme scheme);

struct NodeSet {
    int order = 0;
    Scheme scheme = Scheme::BosCustom;
    std::vector<Point2> nodes;
    std::string metadata;
};

/// Concentric-circle configuration. Ring j (1-based) carries 2n - 4j + 5 points;
/// radii run outermost first. Offsets default to zero when empty.
struct BosArraySpec {
    int order = 0;
    std::vector<double> radii;
    std::vector<double> offsets;
};

std::vector<int> bos_ring_counts(int order);

/// Throws std::invalid_argument when radii do not match the ring count, are
/// not strictly decreasing, or place a multi-point ring at radius 0.
NodeSet bos_array(const BosArraySpec& layout, Scheme scheme = Scheme::BosCustom);

/// Cubic fit in the Chebyshev zeros cos((2j-1)pi / (2(n+1))). The radius from
/// the zero at pi/2 (even n) is returned as exactly 0.
std::vector<double> ocs_radii(int n);
std::vector<double> carnicer_radii(int n, double exponent = 1.46);
/// Non-negative Gauss-Lobatto-Legendre abscissae on n+1 points, i.e. the
/// non-negative zeros of (1 - x^2) P_n'(x), largest first. Always starts at 1.
std::vector<double> cuyt_radii(int n);

/// All zeros of P_d in ascending order, by Newton iteration from Chebyshev-like guesses.
/// Throws std::runtime_error if Newton fails to converge.
std::vector<double> legendre_zeros(int degree);
/// Zeros of P_d' in ascending order (d >= 2). These are the interior Gauss-Lobatto nodes.
std::vector<double> legendre_derivative_zeros(int degree);
/// P_d(x) and P_d'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int degree, double x);

NodeSet ocs_nodes(int n);
NodeSet carnicer_nodes(int n, double exponent = 1.46);
NodeSet cuyt_nodes(int n);

/// Vogel sunflower spiral: point i (1-based) at radius sqrt((i - 1/2)/N), angle i * golden angle.
NodeSet spiral_nodes(int n);

inline constexpr std::size_t kThinningCandidates = 1000;

/// 1000 uniform disk points from Xoshiro256(seed), thinned greedily by
/// farthest-point selection starting at the candidate nearest the boundary.
NodeSet random_thinned_nodes(int n, std::uint64_t seed);

/// Approximate Fekete points: column-pivoted QR of the Zernike Vandermonde on
/// a polar tensor mesh with at least mesh_density points.
NodeSet approximate_fekete(int n, std::size_t mesh_density);

/// Generator-backed schemes by name. FileLoaded is not generated here.
NodeSet generate_nodes(Scheme scheme, int n, std::uint64_t seed = 0);

class NodeFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NodeFileParseError : public NodeFileError {
public:
    using NodeFileError::NodeFileError;
};
class NodeCountError : public NodeFileError {
public:
    using NodeFileError::NodeFileError;
};
class NodeOutsideDiskError : public NodeFileError {
public:
    using NodeFileError::NodeFileError;
};

/// Plain-text node format: one "x y" pair per line, '#' starts a comment,
/// '.' decimal point regardless of locale.
NodeSet read_nodes(std::istream& in, int n, std::string source = "stream");
NodeSet load_nodes(const std::filesystem::path& path, int n);
void write_nodes(std::ostream& out, const NodeSet& set, std::string_view header = {});

}  // namespace zernike
