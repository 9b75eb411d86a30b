#include "zernike/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <span>

namespace zernike {

namespace {

constexpr Eigen::Index kLebesgueChunk = 4096;

void fill_column(const TransferredBasis& basis, Point2 p, Eigen::Ref<Eigen::VectorXd> column) {
    basis.eval_all(p, std::span<double>(column.data(), static_cast<std::size_t>(column.size())));
}

}  // namespace

CollocationMatrix assemble(const TransferredBasis& basis, const NodeSet& nodes) {
    const auto size = basis_size(nodes.order);
    if (nodes.nodes.size() != size) {
        throw std::invalid_argument("collocation needs " + std::to_string(size) + " nodes for order " +
                                    std::to_string(nodes.order) + ", got " + std::to_string(nodes.nodes.size()));
    }
    const auto n = static_cast<Eigen::Index>(size);
    CollocationMatrix matrix{Eigen::MatrixXd(n, n),
                             {std::string(to_string(nodes.scheme)), std::string(to_string(basis.family())),
                              std::string(to_string(basis.map().kind())), nodes.order, 0}};
    for (Eigen::Index c = 0; c < n; ++c) {
        fill_column(basis, nodes.nodes[static_cast<std::size_t>(c)], matrix.entries.col(c));
    }
    if (!matrix.entries.allFinite()) {
        throw NonFiniteEvaluationError("non-finite basis evaluation while assembling " + matrix.provenance.basis +
                                       " on the " + basis.map().describe());
    }
    return matrix;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& matrix) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix);
    if (svd.info() != Eigen::Success) throw std::runtime_error("singular value decomposition did not converge");
    return svd.singularValues();
}

ConditionReport condition_number(const CollocationMatrix& matrix) {
    if (!matrix.entries.allFinite()) throw NonFiniteEvaluationError("collocation matrix has non-finite entries");
    const Eigen::VectorXd sigma = singular_values(matrix.entries);
    ConditionReport report{matrix.provenance.order, matrix.provenance.scheme, matrix.provenance.basis,
                           matrix.provenance.domain};
    if (sigma.size() == 0) return report;
    report.sigma_max = sigma(0);
    report.sigma_min = sigma(sigma.size() - 1);
    report.kappa2 = report.sigma_min < std::numeric_limits<double>::min()
                        ? std::numeric_limits<double>::infinity()
                        : report.sigma_max / report.sigma_min;
    return report;
}

std::string format_kappa(double kappa) {
    if (std::isinf(kappa)) return "inf";
    if (std::isnan(kappa)) return "nan";
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), kappa < 1e3 ? "%.4f" : "%.4e", kappa);
    return buffer;
}

std::string to_csv_row(const ConditionReport& report) {
    char sigma[96];
    std::snprintf(sigma, sizeof(sigma), "%.10e,%.10e", report.sigma_max, report.sigma_min);
    return std::to_string(report.order) + "," + report.scheme + "," + report.basis + "," + report.domain + "," +
           format_kappa(report.kappa2) + "," + sigma;
}

InterpolationSolver::InterpolationSolver(const CollocationMatrix& matrix)
    : transposed_(matrix.entries.transpose()) {
    const Eigen::VectorXd sigma = singular_values(transposed_);
    sigma_max_ = sigma.size() > 0 ? sigma(0) : 0.0;
    sigma_min_ = sigma.size() > 0 ? sigma(sigma.size() - 1) : 0.0;
    const double threshold =
        static_cast<double>(sigma.size()) * std::numeric_limits<double>::epsilon() * sigma_max_;
    if (!(sigma_min_ > threshold)) {
        char buffer[128];
        std::snprintf(buffer, sizeof(buffer), "collocation matrix is singular to working precision (sigma_min=%.3e)",
                      sigma_min_);
        throw SingularMatrixError(buffer, sigma_min_);
    }
    lu_.compute(transposed_);
}

Eigen::VectorXd InterpolationSolver::solve(const Eigen::VectorXd& values) const {
    if (values.size() != transposed_.rows()) throw std::invalid_argument("value vector length must equal N");
    return lu_.solve(values);
}

Eigen::MatrixXd InterpolationSolver::solve(const Eigen::MatrixXd& values) const {
    if (values.rows() != transposed_.rows()) throw std::invalid_argument("value matrix must have N rows");
    return lu_.solve(values);
}

Eigen::MatrixXd InterpolationSolver::lagrange(const Eigen::MatrixXd& basis_values) const {
    // B = transposed_^T, so B^{-1} b = (transposed_^T)^{-1} b.
    return lu_.transpose().solve(basis_values);
}

InterpolationResult solve_interpolation(const CollocationMatrix& matrix, const Eigen::VectorXd& values) {
    const InterpolationSolver solver(matrix);
    InterpolationResult result{solver.solve(values), 0.0};
    result.residual_inf = (matrix.entries.transpose() * result.coefficients - values).lpNorm<Eigen::Infinity>();
    return result;
}

double lebesgue_constant(const TransferredBasis& basis, const NodeSet& nodes, PolarGrid grid) {
    if (grid.radial < 2 || grid.angular < 1) throw std::invalid_argument("Lebesgue grid too coarse");
    const InterpolationSolver solver(assemble(basis, nodes));
    const auto n = static_cast<Eigen::Index>(solver.size());

    std::vector<Point2> points;
    points.reserve(static_cast<std::size_t>(grid.radial) * static_cast<std::size_t>(grid.angular));
    for (int i = 0; i < grid.radial; ++i) {
        const double radius = static_cast<double>(i) / (grid.radial - 1);
        const int spokes = (i == 0) ? 1 : grid.angular;
        for (int k = 0; k < spokes; ++k) {
            const double angle = 2.0 * std::numbers::pi * k / grid.angular;
            points.push_back(basis.map().forward({radius * std::cos(angle), radius * std::sin(angle)}));
        }
    }

    double lebesgue = 0.0;
    Eigen::MatrixXd block;
    for (std::size_t start = 0; start < points.size(); start += kLebesgueChunk) {
        const auto count = static_cast<Eigen::Index>(std::min<std::size_t>(kLebesgueChunk, points.size() - start));
        block.resize(n, count);
        for (Eigen::Index c = 0; c < count; ++c) {
            fill_column(basis, points[start + static_cast<std::size_t>(c)], block.col(c));
        }
        const Eigen::MatrixXd lagrange = solver.lagrange(block);
        lebesgue = std::max(lebesgue, lagrange.cwiseAbs().colwise().sum().maxCoeff());
    }
    return lebesgue;
}

}  // namespace zernike
