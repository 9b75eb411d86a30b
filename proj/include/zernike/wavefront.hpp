#pragma once

// Random Kolmogorov wavefronts over a segmented aperture of 36 unit hexagons,
// and zonal (per-segment) interpolation with the hexagon families K and H.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "zernike/collocation.hpp"
#include "zernike/domains.hpp"
#include "zernike/samplings.hpp"

namespace zernike {

inline constexpr int kWavefrontTerms = 14;
inline constexpr double kApertureRadius = 6.0;

/// f(x, y) = sum_{j=1}^{14} a_j Z_{j-1}((x - cx) / R, (y - cy) / R), R = support radius.
/// Points slightly beyond R (segment corners reach ~6.2) are evaluated by the same polynomials.
struct Wavefront {
    std::array<double, kWavefrontTerms> coefficients{};
    double support_radius = kApertureRadius;
    Point2 center{};

    double operator()(Point2 p) const;
};

/// Noll's Kolmogorov covariance <a_i a_k> of Zernike coefficients in units of
/// (D / r0)^{5/3}, for 0-based single indices. Zero unless the azimuthal
/// frequencies match (same m, which also fixes the cos/sin parity).
double kolmogorov_covariance(int j, int k);

/// Draws a_2..a_14 from N(0, strength^2 * C) with C the Kolmogorov covariance;
/// piston a_1 is always 0. Deterministic per seed.
class KolmogorovModel {
public:
    KolmogorovModel();

    Wavefront sample(std::uint64_t seed, double strength = 1.0) const;
    /// Model variance of a_j (1-based, as in the wavefront sum).
    double variance(int j) const;

private:
    Eigen::MatrixXd covariance_;
    Eigen::MatrixXd cholesky_;
};

Wavefront kolmogorov_wavefront(std::uint64_t seed, double strength = 1.0);

/// Pointy-top unit hexagons (vertices at pi/6 + k pi/3) with flat-to-flat
/// spacing sqrt(3), occupying hexagonal rings 1..3 around an empty centre cell.
struct SegmentedAperture {
    std::vector<Point2> centers;

    std::size_t size() const { return centers.size(); }
    /// Closed point-in-hexagon test for segment k.
    bool contains(std::size_t k, Point2 p, double tolerance = 1e-12) const;
    std::array<Point2, 6> vertices(std::size_t k) const;
    /// Lowest-index segment containing p, if any.
    std::optional<std::size_t> segment_of(Point2 p) const;
};

SegmentedAperture build_aperture(Point2 offset = {});

/// Square lattice offsets (relative to a segment centre) inside the unit
/// hexagon. Cell-centred with spacing sqrt(area / target), so no offset lies
/// on the hexagon boundary.
std::vector<Point2> hexagon_grid(std::size_t target_points = 2500);

/// Z_0..Z_13 of the normalized aperture coordinates at every grid point of
/// every segment (one grid-points x 14 matrix per segment).
struct ModeTable {
    std::vector<Eigen::MatrixXd> per_segment;
    double support_radius = kApertureRadius;
    Point2 center{};
};

ModeTable tabulate_modes(const SegmentedAperture& aperture, const std::vector<Point2>& offsets,
                         double support_radius = kApertureRadius, Point2 center = {});

class ZeroWavefrontError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// sqrt(sum |approx - truth|^2 / sum |truth|^2). Throws ZeroWavefrontError when truth is zero.
double rrmse(std::span<const double> approx, std::span<const double> truth);

struct ReconstructionResult {
    int order = 0;
    std::string scheme;
    Family family = Family::K;
    std::vector<Eigen::VectorXd> coefficients;  // one per segment
    std::vector<double> segment_rrmse;
    double rrmse = 0.0;
};

class LocalSystemError : public std::runtime_error {
public:
    LocalSystemError(const std::string& what, std::size_t segment, double sigma_min)
        : std::runtime_error(what), segment_(segment), sigma_min_(sigma_min) {}
    std::size_t segment() const { return segment_; }
    double sigma_min() const { return sigma_min_; }

private:
    std::size_t segment_;
    double sigma_min_;
};

/// Zonal interpolation set up once per (disk nodes, family): transfers the
/// nodes to the unit hexagon, factors the local collocation matrix and
/// tabulates the basis on the evaluation grid. Every segment shares the same
/// local geometry, so one factorization serves all 36.
class ZonalInterpolator {
public:
    ZonalInterpolator(SegmentedAperture aperture, const NodeSet& disk_nodes, Family family,
                      std::size_t grid_points = 2500);

    const SegmentedAperture& aperture() const { return aperture_; }
    const NodeSet& local_nodes() const { return local_nodes_; }
    const std::vector<Point2>& grid() const { return grid_; }

    /// Sample positions of segment k in aperture coordinates.
    std::vector<Point2> sample_points(std::size_t k) const;
    /// Coefficients for segment k from values at sample_points(k).
    Eigen::VectorXd fit_segment(std::size_t k, const Eigen::VectorXd& samples) const;
    /// Reconstruction on segment k's evaluation grid.
    Eigen::VectorXd evaluate_segment(const Eigen::VectorXd& coefficients) const;

    ReconstructionResult reconstruct(const std::function<double(Point2)>& f) const;
    /// Global RRMSE of each wavefront over all segments, batched through one
    /// factorization. All wavefronts must share the table's support radius and centre.
    std::vector<double> batch_rrmse(const std::vector<Wavefront>& wavefronts, const ModeTable& grid_modes) const;
    std::vector<double> batch_rrmse(const std::vector<Wavefront>& wavefronts) const;

private:
    SegmentedAperture aperture_;
    TransferredBasis basis_;
    NodeSet local_nodes_;
    std::vector<Point2> grid_;
    std::optional<InterpolationSolver> solver_;
    Eigen::MatrixXd grid_basis_;  // grid points x N
};

ReconstructionResult zonal_interpolate(const SegmentedAperture& aperture, const Wavefront& wavefront,
                                       const NodeSet& disk_nodes, Family family);

struct ExperimentConfig {
    std::vector<int> orders;
    std::size_t trials = 100;
    std::vector<std::string> schemes;
    std::vector<Family> bases;
    std::uint64_t seed = 1;
    double strength = 1.0;
    std::size_t grid_points = 2500;
};

struct ExperimentRow {
    int order = 0;
    std::string scheme;
    Family family = Family::K;
    double mean_rrmse = 0.0;
    std::size_t trials = 0;
    std::string failure;  // empty on success
};

/// Supplies disk nodes for (scheme name, order); may throw to mark a failed cell.
using NodeProvider = std::function<NodeSet(const std::string&, int)>;

/// Trial t uses the wavefront drawn with derive_seed(seed, t), so every cell
/// sees the same 'trials' wavefronts. Cells that throw become failure rows.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config, const NodeProvider& nodes);

inline constexpr const char* kExperimentCsvHeader = "n,scheme,basis,mean_rrmse,trials";
std::string to_csv_row(const ExperimentRow& row);

}  // namespace zernike
