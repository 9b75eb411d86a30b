#pragma once

// Collocation matrices B = (Q_{i-1}(s_j))_{i,j}: rows index basis functions,
// columns index nodes. The interpolation coefficients c of data f sampled at
// the nodes solve B^T c = f.

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "zernike/domains.hpp"
#include "zernike/samplings.hpp"

namespace zernike {

struct Provenance {
    std::string scheme;
    std::string basis;
    std::string domain;
    int order = 0;
    std::uint64_t seed = 0;
};

struct CollocationMatrix {
    Eigen::MatrixXd entries;
    Provenance provenance;
};

/// Raised by assembly when a basis value is NaN or infinite.
class NonFiniteEvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, double sigma_min)
        : std::runtime_error(what), sigma_min_(sigma_min) {}
    double sigma_min() const { return sigma_min_; }

private:
    double sigma_min_;
};

/// Nodes must already lie on the basis domain (see transfer_nodes). Throws
/// OutsideDomainError for a node outside it, std::invalid_argument when the
/// node count differs from basis_size(order).
CollocationMatrix assemble(const TransferredBasis& basis, const NodeSet& nodes);

struct ConditionReport {
    int order = 0;
    std::string scheme;
    std::string basis;
    std::string domain;
    double kappa2 = std::numeric_limits<double>::infinity();
    double sigma_max = 0.0;
    double sigma_min = 0.0;
};

/// Full SVD. sigma_min below the smallest normal double is reported as kappa2 = +inf.
ConditionReport condition_number(const CollocationMatrix& matrix);
Eigen::VectorXd singular_values(const Eigen::MatrixXd& matrix);

inline constexpr const char* kConditionCsvHeader = "n,scheme,basis,domain,kappa2,sigma_max,sigma_min";
/// Fixed 4 decimals below 1e3, otherwise "%.4e"; "inf" for singular matrices.
std::string format_kappa(double kappa);
std::string to_csv_row(const ConditionReport& report);

/// Factors B^T once; reused for many right-hand sides.
class InterpolationSolver {
public:
    /// Throws SingularMatrixError when sigma_min <= N * eps * sigma_max.
    explicit InterpolationSolver(const CollocationMatrix& matrix);

    std::size_t size() const { return static_cast<std::size_t>(transposed_.rows()); }
    double sigma_min() const { return sigma_min_; }
    double sigma_max() const { return sigma_max_; }

    Eigen::VectorXd solve(const Eigen::VectorXd& values) const;
    /// Each column of values is one data vector.
    Eigen::MatrixXd solve(const Eigen::MatrixXd& values) const;
    /// Lagrange functions at points with basis evaluations in the columns of
    /// basis_values: l = B^{-1} b(x).
    Eigen::MatrixXd lagrange(const Eigen::MatrixXd& basis_values) const;

private:
    Eigen::MatrixXd transposed_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double sigma_min_ = 0.0;
    double sigma_max_ = 0.0;
};

struct InterpolationResult {
    Eigen::VectorXd coefficients;
    double residual_inf = 0.0;
};

/// Coefficients c with B^T c = values, plus ||B^T c - values||_inf.
InterpolationResult solve_interpolation(const CollocationMatrix& matrix, const Eigen::VectorXd& values);

struct PolarGrid {
    int radial = 200;
    int angular = 512;
};

/// Lower-bound estimate of the Lebesgue constant: max of sum_j |l_j(x)| over a
/// polar tensor grid (radii i / (radial - 1), i = 0..radial-1, angles 2 pi k / angular)
/// mapped onto the basis domain. For the annulus the grid radius runs over the
/// disk and lands on [a, A] through the forward map.
double lebesgue_constant(const TransferredBasis& basis, const NodeSet& nodes, PolarGrid grid = {});

}  // namespace zernike
