#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "zernike/collocation.hpp"
#include "zernike/rng.hpp"

using namespace zernike;

namespace {

CollocationMatrix disk_matrix(const NodeSet& set) {
    return assemble(TransferredBasis(DomainMap::disk(), Family::Z), set);
}

double kappa(const DomainMap& map, Family family, const NodeSet& disk, double epsilon = 0.0) {
    return condition_number(assemble(TransferredBasis(map, family), transfer_nodes(map, disk, epsilon))).kappa2;
}

Eigen::VectorXd random_coefficients(std::size_t size, std::uint64_t seed) {
    Xoshiro256 rng(seed);
    Eigen::VectorXd c(static_cast<Eigen::Index>(size));
    for (auto& v : c) v = rng.normal();
    return c;
}

}  // namespace

TEST_CASE("assembly layout") {
    const NodeSet disk = ocs_nodes(4);
    const CollocationMatrix m = disk_matrix(disk);
    REQUIRE(m.entries.rows() == 15);
    REQUIRE(m.entries.cols() == 15);
    for (int i = 0; i < 15; ++i) {
        for (int j = 0; j < 15; ++j) CHECK(m.entries(i, j) == zernike::zernike(i, disk.nodes[j]));
    }
    CHECK(m.provenance.order == 4);
    CHECK(m.provenance.basis == "Z");
    CHECK(m.provenance.domain == "disk");

    const auto hex = DomainMap::hexagon();
    const CollocationMatrix k = assemble(TransferredBasis(hex, Family::K), transfer_nodes(hex, disk));
    for (int j = 0; j < 15; ++j) CHECK(k.entries(0, j) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("assembly rejects bad input") {
    NodeSet short_set = ocs_nodes(4);
    short_set.nodes.pop_back();
    CHECK_THROWS_AS(disk_matrix(short_set), std::invalid_argument);
    NodeSet outside = ocs_nodes(4);
    outside.nodes[0] = {1.5, 0.0};
    CHECK_THROWS_AS(disk_matrix(outside), OutsideDomainError);
}

TEST_CASE("hexagon H factors as Z times the diagonal of q") {
    const auto hex = DomainMap::hexagon();
    const TransferredBasis h(hex, Family::H);
    for (const auto& disk : {ocs_nodes(12), carnicer_nodes(12), cuyt_nodes(12)}) {
        const NodeSet nodes = transfer_nodes(hex, disk);
        const Eigen::MatrixXd H = assemble(h, nodes).entries;
        const Eigen::MatrixXd Z = disk_matrix(disk).entries;
        Eigen::VectorXd q(static_cast<Eigen::Index>(nodes.nodes.size()));
        for (std::size_t j = 0; j < nodes.nodes.size(); ++j) q(static_cast<Eigen::Index>(j)) = h.q(nodes.nodes[j]);
        CHECK((H - Z * q.asDiagonal()).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("condition number basics") {
    CollocationMatrix identity{Eigen::MatrixXd::Identity(7, 7), {}};
    const ConditionReport r = condition_number(identity);
    CHECK(r.kappa2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.sigma_max == doctest::Approx(1.0));

    CollocationMatrix diag{Eigen::VectorXd::LinSpaced(4, 1.0, 4.0).asDiagonal(), {}};
    CHECK(condition_number(diag).kappa2 == doctest::Approx(4.0).epsilon(1e-14));

    CollocationMatrix singular{Eigen::MatrixXd::Zero(3, 3), {}};
    singular.entries(0, 0) = 1.0;
    CHECK(std::isinf(condition_number(singular).kappa2));
    CHECK(format_kappa(condition_number(singular).kappa2) == "inf");
}

TEST_CASE("disk anchors") {
    CHECK(format_kappa(condition_number(disk_matrix(ocs_nodes(1))).kappa2) == "1.0894");
    CHECK(format_kappa(condition_number(disk_matrix(ocs_nodes(30))).kappa2) == "58.7650");
    CHECK(condition_number(disk_matrix(carnicer_nodes(30))).kappa2 == doctest::Approx(201.7801).epsilon(1e-3));
    CHECK(condition_number(disk_matrix(cuyt_nodes(30))).kappa2 == doctest::Approx(2256.2).epsilon(1e-3));
}

TEST_CASE("transferred condition numbers equal the disk ones for constant q") {
    for (const int n : {5, 10, 20}) {
        for (const auto& disk : {ocs_nodes(n), carnicer_nodes(n), cuyt_nodes(n)}) {
            const double z = condition_number(disk_matrix(disk)).kappa2;
            INFO("n = " << n << " scheme = " << to_string(disk.scheme));
            CHECK(std::abs(kappa(DomainMap::hexagon(), Family::K, disk) / z - 1.0) < 1e-12);
            CHECK(std::abs(kappa(DomainMap::ellipse(2.0, 1.0), Family::E, disk) / z - 1.0) < 1e-12);
            CHECK(std::abs(kappa(DomainMap::annulus(0.5, 1.0), Family::C, disk) / z - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("ill-conditioned sets agree up to the rounding level kappa * eps") {
    // Rounding the transferred entries perturbs sigma_min by about eps * sigma_max,
    // so agreement can be no tighter than kappa * eps.
    for (const auto& disk : {spiral_nodes(20), random_thinned_nodes(20, 1)}) {
        const double z = condition_number(disk_matrix(disk)).kappa2;
        const double level = z * std::numeric_limits<double>::epsilon();
        INFO("scheme = " << to_string(disk.scheme) << " kappa = " << z);
        CHECK(std::abs(kappa(DomainMap::hexagon(), Family::K, disk) / z - 1.0) < 10.0 * level);
        CHECK(std::abs(kappa(DomainMap::ellipse(2.0, 1.0), Family::E, disk) / z - 1.0) < 10.0 * level);
        CHECK(std::abs(kappa(DomainMap::annulus(0.5, 1.0), Family::C, disk) / z - 1.0) < 10.0 * level);
    }
}

TEST_CASE("hexagon H is at most 2/sqrt(3) worse than the disk") {
    for (int n = 1; n <= 30; ++n) {
        for (const auto& disk : {ocs_nodes(n), carnicer_nodes(n), cuyt_nodes(n)}) {
            const double z = condition_number(disk_matrix(disk)).kappa2;
            CHECK(kappa(DomainMap::hexagon(), Family::H, disk) <= 2.0 / std::sqrt(3.0) * z * (1.0 + 1e-10));
        }
    }
}

TEST_CASE("annulus conditioning blows up as the inner push shrinks") {
    const auto ann = DomainMap::annulus(0.5, 1.0);
    const NodeSet disk = ocs_nodes(6);
    const double k2 = kappa(ann, Family::O, disk, 1e-2);
    const double k4 = kappa(ann, Family::O, disk, 1e-4);
    const double k6 = kappa(ann, Family::O, disk, 1e-6);
    CHECK(k2 < k4);
    CHECK(k4 < k6);
    CHECK(std::isinf(kappa(ann, Family::O, disk, 0.0)));
    CHECK(format_kappa(kappa(ann, Family::O, ocs_nodes(2), 0.01)) == "6.2580");
}

TEST_CASE("csv formatting") {
    CHECK(format_kappa(58.765012) == "58.7650");
    CHECK(format_kappa(999.99994) == "999.9999");
    CHECK(format_kappa(2256.2) == "2.2562e+03");
    CHECK(format_kappa(std::numeric_limits<double>::infinity()) == "inf");

    ConditionReport report;
    report.order = 3;
    report.scheme = "ocs";
    report.basis = "H";
    report.domain = "hexagon";
    report.kappa2 = 2.5;
    report.sigma_max = 5.0;
    report.sigma_min = 2.0;
    const std::string row = to_csv_row(report);
    CHECK(row.rfind("3,ocs,H,hexagon,2.5000,", 0) == 0);
    CHECK(std::count(row.begin(), row.end(), ',') == 6);
    CHECK(std::string(kConditionCsvHeader) == "n,scheme,basis,domain,kappa2,sigma_max,sigma_min");
}

TEST_CASE("interpolation reproduces basis functions") {
    const NodeSet disk = ocs_nodes(5);
    const CollocationMatrix m = disk_matrix(disk);
    Eigen::VectorXd values(21);
    for (int j = 0; j < 21; ++j) values(j) = zernike::zernike(5, disk.nodes[j]);
    const InterpolationResult r = solve_interpolation(m, values);
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(21);
    expected(5) = 1.0;
    CHECK((r.coefficients - expected).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(r.residual_inf < 1e-12);

    const InterpolationResult zero = solve_interpolation(m, Eigen::VectorXd::Zero(21));
    CHECK(zero.coefficients.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random polynomials are reproduced off the nodes") {
    for (int n = 1; n <= 10; ++n) {
        const NodeSet disk = carnicer_nodes(n);
        const auto size = basis_size(n);
        const Eigen::VectorXd c = random_coefficients(size, 100 + n);
        const CollocationMatrix m = disk_matrix(disk);
        const Eigen::VectorXd samples = m.entries.transpose() * c;
        const InterpolationResult r = solve_interpolation(m, samples);

        Xoshiro256 rng(200 + n);
        double err = 0.0;
        double scale = 0.0;
        std::vector<double> basis(size);
        for (int i = 0; i < 500; ++i) {
            const double rho = std::sqrt(rng.uniform());
            const double t = 2.0 * std::numbers::pi * rng.uniform();
            zernike_all(Point2{rho * std::cos(t), rho * std::sin(t)}, basis);
            double truth = 0.0;
            double approx = 0.0;
            for (std::size_t j = 0; j < size; ++j) {
                truth += c(static_cast<Eigen::Index>(j)) * basis[j];
                approx += r.coefficients(static_cast<Eigen::Index>(j)) * basis[j];
            }
            err = std::max(err, std::abs(truth - approx));
            scale = std::max(scale, std::abs(truth));
        }
        CHECK(err / scale < 1e-6);
    }
}

TEST_CASE("solver rejects singular systems") {
    NodeSet set = ocs_nodes(3);
    set.nodes[4] = set.nodes[3];
    try {
        InterpolationSolver solver(disk_matrix(set));
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.sigma_min() >= 0.0);
        CHECK(e.sigma_min() < 1e-12);
    }
}

TEST_CASE("lebesgue constant") {
    const PolarGrid grid{60, 128};
    const TransferredBasis z(DomainMap::disk(), Family::Z);
    const NodeSet single = bos_array({0, {0.0}, {}});
    CHECK(lebesgue_constant(z, single, grid) == doctest::Approx(1.0).epsilon(1e-14));

    const double ocs = lebesgue_constant(z, ocs_nodes(10), grid);
    CHECK(std::isfinite(ocs));
    CHECK(ocs >= 1.0);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const double random = lebesgue_constant(z, random_thinned_nodes(10, seed), grid);
        INFO("seed " << seed);
        CHECK(random >= 1.0);
        CHECK(ocs < random);
    }

    const auto hex = DomainMap::hexagon();
    CHECK(lebesgue_constant(TransferredBasis(hex, Family::H), transfer_nodes(hex, ocs_nodes(6)), grid) >= 1.0);
}
