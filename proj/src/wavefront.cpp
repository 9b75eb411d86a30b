#include "zernike/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <span>

#include "zernike/rng.hpp"

namespace zernike {

namespace {

constexpr std::array<std::array<int, 2>, 6> kAxialDirections{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};
constexpr int kApertureRings = 3;

Point2 normalized(const Wavefront& w, Point2 p) {
    return {(p.x - w.center.x) / w.support_radius, (p.y - w.center.y) / w.support_radius};
}

Eigen::RowVectorXd mode_row(Point2 normalized_point) {
    Eigen::RowVectorXd row(kWavefrontTerms);
    zernike_all(normalized_point, std::span<double>(row.data(), kWavefrontTerms));
    return row;
}

Eigen::MatrixXd coefficient_matrix(const std::vector<Wavefront>& wavefronts) {
    Eigen::MatrixXd a(kWavefrontTerms, static_cast<Eigen::Index>(wavefronts.size()));
    for (std::size_t t = 0; t < wavefronts.size(); ++t) {
        for (int j = 0; j < kWavefrontTerms; ++j) {
            a(j, static_cast<Eigen::Index>(t)) = wavefronts[t].coefficients[static_cast<std::size_t>(j)];
        }
    }
    return a;
}

}  // namespace

double Wavefront::operator()(Point2 p) const {
    const PolarPoint polar = to_polar(normalized(*this, p));
    double sum = 0.0;
    for (int j = 0; j < kWavefrontTerms; ++j) {
        const double a = coefficients[static_cast<std::size_t>(j)];
        if (a != 0.0) sum += a * zernike(j, polar);
    }
    return sum;
}

double kolmogorov_covariance(int j, int k) {
    const ZernikeIndex a = index_to_nm(j);
    const ZernikeIndex b = index_to_nm(k);
    if (a.n == 0 || b.n == 0 || a.m != b.m) return 0.0;
    // Noll (1976): K_{zz'} Gamma((n+n'-5/3)/2) / [Gamma((n-n'+17/3)/2) Gamma((n'-n+17/3)/2) Gamma((n+n'+23/3)/2)],
    // K_{zz'} = Gamma(14/3) [(24/5) Gamma(6/5)]^{5/6} Gamma(11/6)^2 / (2 pi^2) (-1)^{(n+n'-2|m|)/2} sqrt((n+1)(n'+1)).
    static const double kConstant = std::tgamma(14.0 / 3.0) * std::pow(24.0 / 5.0 * std::tgamma(6.0 / 5.0), 5.0 / 6.0) *
                                    std::pow(std::tgamma(11.0 / 6.0), 2) / (2.0 * std::numbers::pi * std::numbers::pi);
    const double n = a.n;
    const double np = b.n;
    const int parity = (a.n + b.n - 2 * std::abs(a.m)) / 2;
    const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
    return kConstant * sign * std::sqrt((n + 1.0) * (np + 1.0)) * std::tgamma((n + np - 5.0 / 3.0) / 2.0) /
           (std::tgamma((n - np + 17.0 / 3.0) / 2.0) * std::tgamma((np - n + 17.0 / 3.0) / 2.0) *
            std::tgamma((n + np + 23.0 / 3.0) / 2.0));
}

KolmogorovModel::KolmogorovModel() : covariance_(kWavefrontTerms - 1, kWavefrontTerms - 1) {
    for (int r = 0; r < kWavefrontTerms - 1; ++r) {
        for (int c = 0; c < kWavefrontTerms - 1; ++c) covariance_(r, c) = kolmogorov_covariance(r + 1, c + 1);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
    if (llt.info() != Eigen::Success) throw std::runtime_error("Kolmogorov covariance is not positive definite");
    cholesky_ = llt.matrixL();
}

Wavefront KolmogorovModel::sample(std::uint64_t seed, double strength) const {
    if (!(strength > 0.0) || !std::isfinite(strength)) throw std::invalid_argument("turbulence strength must be > 0");
    Xoshiro256 rng(seed);
    Eigen::VectorXd z(kWavefrontTerms - 1);
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    const Eigen::VectorXd draw = strength * (cholesky_ * z);
    Wavefront w;
    w.coefficients[0] = 0.0;
    for (int j = 1; j < kWavefrontTerms; ++j) w.coefficients[static_cast<std::size_t>(j)] = draw(j - 1);
    return w;
}

double KolmogorovModel::variance(int j) const {
    if (j < 1 || j > kWavefrontTerms) throw std::out_of_range("wavefront coefficient index out of range");
    return j == 1 ? 0.0 : covariance_(j - 2, j - 2);
}

Wavefront kolmogorov_wavefront(std::uint64_t seed, double strength) {
    static const KolmogorovModel model;
    return model.sample(seed, strength);
}

bool SegmentedAperture::contains(std::size_t k, Point2 p, double tolerance) const {
    const Point2 c = centers.at(k);
    return DomainMap::hexagon().contains({p.x - c.x, p.y - c.y}, tolerance);
}

std::array<Point2, 6> SegmentedAperture::vertices(std::size_t k) const {
    const Point2 c = centers.at(k);
    std::array<Point2, 6> v{};
    for (int i = 0; i < 6; ++i) {
        const double angle = std::numbers::pi / 6.0 + i * std::numbers::pi / 3.0;
        v[static_cast<std::size_t>(i)] = {c.x + std::cos(angle), c.y + std::sin(angle)};
    }
    return v;
}

std::optional<std::size_t> SegmentedAperture::segment_of(Point2 p) const {
    for (std::size_t k = 0; k < centers.size(); ++k) {
        if (contains(k, p)) return k;
    }
    return std::nullopt;
}

SegmentedAperture build_aperture(Point2 offset) {
    const double root3 = std::sqrt(3.0);
    const auto to_plane = [&](int q, int r) {
        return Point2{offset.x + root3 * (q + 0.5 * r), offset.y + 1.5 * r};
    };
    SegmentedAperture aperture;
    for (int ring = 1; ring <= kApertureRings; ++ring) {
        // Walk the ring: start `ring` steps along direction 4, then `ring` steps along each direction.
        int q = kAxialDirections[4][0] * ring;
        int r = kAxialDirections[4][1] * ring;
        for (const auto& direction : kAxialDirections) {
            for (int step = 0; step < ring; ++step) {
                aperture.centers.push_back(to_plane(q, r));
                q += direction[0];
                r += direction[1];
            }
        }
    }
    return aperture;
}

std::vector<Point2> hexagon_grid(std::size_t target_points) {
    if (target_points == 0) throw std::invalid_argument("grid needs at least one point");
    const double area = 1.5 * std::sqrt(3.0);
    const double spacing = std::sqrt(area / static_cast<double>(target_points));
    const int half = static_cast<int>(std::ceil(1.0 / spacing)) + 1;
    std::vector<Point2> grid;
    for (int iy = -half; iy < half; ++iy) {
        for (int ix = -half; ix < half; ++ix) {
            const Point2 p{(ix + 0.5) * spacing, (iy + 0.5) * spacing};
            const PolarPoint polar = to_polar(p);
            if (polar.rho < r_alpha(polar.theta, kHexagonHalfAngle) - 1e-12) grid.push_back(p);
        }
    }
    return grid;
}

ModeTable tabulate_modes(const SegmentedAperture& aperture, const std::vector<Point2>& offsets, double support_radius,
                         Point2 center) {
    ModeTable table{{}, support_radius, center};
    Wavefront frame;
    frame.support_radius = support_radius;
    frame.center = center;
    table.per_segment.reserve(aperture.size());
    for (const Point2 c : aperture.centers) {
        Eigen::MatrixXd modes(static_cast<Eigen::Index>(offsets.size()), kWavefrontTerms);
        for (std::size_t i = 0; i < offsets.size(); ++i) {
            modes.row(static_cast<Eigen::Index>(i)) = mode_row(normalized(frame, {c.x + offsets[i].x, c.y + offsets[i].y}));
        }
        table.per_segment.push_back(std::move(modes));
    }
    return table;
}

double rrmse(std::span<const double> approx, std::span<const double> truth) {
    if (approx.size() != truth.size()) throw std::invalid_argument("rrmse inputs differ in length");
    double error = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = approx[i] - truth[i];
        error += d * d;
        norm += truth[i] * truth[i];
    }
    if (norm == 0.0) throw ZeroWavefrontError("RRMSE undefined: reference wavefront is identically zero");
    return std::sqrt(error / norm);
}

ZonalInterpolator::ZonalInterpolator(SegmentedAperture aperture, const NodeSet& disk_nodes, Family family,
                                     std::size_t grid_points)
    : aperture_(std::move(aperture)),
      basis_(DomainMap::hexagon(), family),
      local_nodes_(transfer_nodes(DomainMap::hexagon(), disk_nodes)),
      grid_(hexagon_grid(grid_points)) {
    const CollocationMatrix matrix = assemble(basis_, local_nodes_);
    try {
        solver_.emplace(matrix);
    } catch (const SingularMatrixError& e) {
        // Segments share the local geometry, so the first one is representative.
        throw LocalSystemError(std::string("segment 0: ") + e.what(), 0, e.sigma_min());
    }
    const auto n = static_cast<Eigen::Index>(local_nodes_.nodes.size());
    grid_basis_.resize(static_cast<Eigen::Index>(grid_.size()), n);
    Eigen::VectorXd column(n);
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        basis_.eval_all(grid_[i], std::span<double>(column.data(), static_cast<std::size_t>(n)));
        grid_basis_.row(static_cast<Eigen::Index>(i)) = column.transpose();
    }
}

std::vector<Point2> ZonalInterpolator::sample_points(std::size_t k) const {
    const Point2 c = aperture_.centers.at(k);
    std::vector<Point2> points;
    points.reserve(local_nodes_.nodes.size());
    for (const Point2 p : local_nodes_.nodes) points.push_back({c.x + p.x, c.y + p.y});
    return points;
}

Eigen::VectorXd ZonalInterpolator::fit_segment(std::size_t k, const Eigen::VectorXd& samples) const {
    if (k >= aperture_.size()) throw std::out_of_range("segment index out of range");
    return solver_->solve(samples);
}

Eigen::VectorXd ZonalInterpolator::evaluate_segment(const Eigen::VectorXd& coefficients) const {
    return grid_basis_ * coefficients;
}

ReconstructionResult ZonalInterpolator::reconstruct(const std::function<double(Point2)>& f) const {
    ReconstructionResult result{local_nodes_.order, std::string(to_string(local_nodes_.scheme)), basis_.family(),
                                {}, {}, 0.0};
    double error = 0.0;
    double norm = 0.0;
    for (std::size_t k = 0; k < aperture_.size(); ++k) {
        const auto points = sample_points(k);
        Eigen::VectorXd samples(static_cast<Eigen::Index>(points.size()));
        for (std::size_t i = 0; i < points.size(); ++i) samples(static_cast<Eigen::Index>(i)) = f(points[i]);
        Eigen::VectorXd coefficients = fit_segment(k, samples);

        const Eigen::VectorXd approx = evaluate_segment(coefficients);
        const Point2 c = aperture_.centers[k];
        Eigen::VectorXd truth(approx.size());
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            truth(static_cast<Eigen::Index>(i)) = f({c.x + grid_[i].x, c.y + grid_[i].y});
        }
        const double segment_error = (approx - truth).squaredNorm();
        const double segment_norm = truth.squaredNorm();
        error += segment_error;
        norm += segment_norm;
        result.segment_rrmse.push_back(segment_norm == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                                           : std::sqrt(segment_error / segment_norm));
        result.coefficients.push_back(std::move(coefficients));
    }
    if (norm == 0.0) throw ZeroWavefrontError("RRMSE undefined: reference wavefront is identically zero");
    result.rrmse = std::sqrt(error / norm);
    return result;
}

std::vector<double> ZonalInterpolator::batch_rrmse(const std::vector<Wavefront>& wavefronts,
                                                   const ModeTable& grid_modes) const {
    if (wavefronts.empty()) return {};
    if (grid_modes.per_segment.size() != aperture_.size()) throw std::invalid_argument("mode table/aperture mismatch");
    for (const auto& w : wavefronts) {
        if (w.support_radius != grid_modes.support_radius || w.center.x != grid_modes.center.x ||
            w.center.y != grid_modes.center.y) {
            throw std::invalid_argument("wavefront frame differs from the mode table");
        }
    }
    const Eigen::MatrixXd a = coefficient_matrix(wavefronts);
    const auto trials = a.cols();
    Eigen::ArrayXd error = Eigen::ArrayXd::Zero(trials);
    Eigen::ArrayXd norm = Eigen::ArrayXd::Zero(trials);
    const Wavefront& frame = wavefronts.front();

    const auto n = static_cast<Eigen::Index>(local_nodes_.nodes.size());
    Eigen::MatrixXd sample_modes(n, kWavefrontTerms);
    for (std::size_t k = 0; k < aperture_.size(); ++k) {
        const auto points = sample_points(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            sample_modes.row(i) = mode_row(normalized(frame, points[static_cast<std::size_t>(i)]));
        }
        const Eigen::MatrixXd coefficients = solver_->solve(Eigen::MatrixXd(sample_modes * a));
        const Eigen::MatrixXd truth = grid_modes.per_segment[k] * a;
        const Eigen::MatrixXd approx = grid_basis_ * coefficients;
        error += (approx - truth).colwise().squaredNorm().transpose().array();
        norm += truth.colwise().squaredNorm().transpose().array();
    }
    std::vector<double> result(static_cast<std::size_t>(trials));
    for (Eigen::Index t = 0; t < trials; ++t) {
        if (norm(t) == 0.0) throw ZeroWavefrontError("RRMSE undefined: reference wavefront is identically zero");
        result[static_cast<std::size_t>(t)] = std::sqrt(error(t) / norm(t));
    }
    return result;
}

std::vector<double> ZonalInterpolator::batch_rrmse(const std::vector<Wavefront>& wavefronts) const {
    if (wavefronts.empty()) return {};
    return batch_rrmse(wavefronts,
                       tabulate_modes(aperture_, grid_, wavefronts.front().support_radius, wavefronts.front().center));
}

ReconstructionResult zonal_interpolate(const SegmentedAperture& aperture, const Wavefront& wavefront,
                                       const NodeSet& disk_nodes, Family family) {
    const ZonalInterpolator interpolator(aperture, disk_nodes, family);
    return interpolator.reconstruct([&wavefront](Point2 p) { return wavefront(p); });
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config, const NodeProvider& nodes) {
    if (config.trials < 1) throw std::invalid_argument("experiment needs at least one trial");
    for (const Family family : config.bases) {
        if (!family_valid_for(family, DomainKind::Hexagon)) {
            throw std::invalid_argument("zonal interpolation supports the hexagon families K and H only");
        }
    }
    const KolmogorovModel model;
    std::vector<Wavefront> wavefronts;
    wavefronts.reserve(config.trials);
    for (std::size_t t = 0; t < config.trials; ++t) {
        wavefronts.push_back(model.sample(derive_seed(config.seed, t), config.strength));
    }
    const SegmentedAperture aperture = build_aperture();
    const ModeTable grid_modes = tabulate_modes(aperture, hexagon_grid(config.grid_points));

    std::vector<ExperimentRow> rows;
    for (const int order : config.orders) {
        for (const auto& scheme : config.schemes) {
            std::optional<NodeSet> disk_nodes;
            std::string node_failure;
            try {
                disk_nodes = nodes(scheme, order);
            } catch (const std::exception& e) {
                node_failure = e.what();
            }
            for (const Family family : config.bases) {
                ExperimentRow row{order, scheme, family, 0.0, config.trials, node_failure};
                if (disk_nodes) {
                    try {
                        const ZonalInterpolator interpolator(aperture, *disk_nodes, family, config.grid_points);
                        const auto errors = interpolator.batch_rrmse(wavefronts, grid_modes);
                        double sum = 0.0;
                        for (const double e : errors) sum += e;
                        row.mean_rrmse = sum / static_cast<double>(errors.size());
                    } catch (const std::exception& e) {
                        row.failure = e.what();
                    }
                }
                if (!row.failure.empty()) row.trials = 0;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::string to_csv_row(const ExperimentRow& row) {
    std::string out = std::to_string(row.order) + "," + row.scheme + "," + std::string(to_string(row.family)) + ",";
    if (!row.failure.empty()) return out + "failed," + std::to_string(row.trials);
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6e", row.mean_rrmse);
    return out + buffer + "," + std::to_string(row.trials);
}

}  // namespace zernike
