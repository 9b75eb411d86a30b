#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "quadrature.hpp"
#include "zernike/collocation.hpp"
#include "zernike/rng.hpp"
#include "zernike/samplings.hpp"

using namespace zernike;

namespace {

const std::filesystem::path kData{ZN_TEST_DATA_DIR};

double disk_kappa(const NodeSet& set) {
    return condition_number(assemble(TransferredBasis(DomainMap::disk(), Family::Z), set)).kappa2;
}

Eigen::VectorXd disk_singular_values(const NodeSet& set) {
    return singular_values(assemble(TransferredBasis(DomainMap::disk(), Family::Z), set).entries);
}

void check_radii(const std::vector<double>& actual, const std::vector<double>& expected, double tol) {
    REQUIRE(actual.size() == expected.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
        INFO("ring " << i + 1);
        CHECK(std::abs(actual[i] - expected[i]) <= tol);
    }
}

bool inside_disk(const NodeSet& set) {
    return std::all_of(set.nodes.begin(), set.nodes.end(), [](Point2 p) { return std::hypot(p.x, p.y) <= 1.0 + 1e-12; });
}

}  // namespace

TEST_CASE("ring counts") {
    CHECK(bos_ring_counts(10) == std::vector<int>{21, 17, 13, 9, 5, 1});
    CHECK(bos_ring_counts(1) == std::vector<int>{3});
    CHECK(bos_ring_counts(0) == std::vector<int>{1});
    for (int n = 0; n <= 30; ++n) {
        const auto counts = bos_ring_counts(n);
        int total = 0;
        for (const int c : counts) total += c;
        CHECK(total == static_cast<int>(basis_size(n)));
    }
}

TEST_CASE("bos array construction") {
    const NodeSet set = bos_array({2, {1.0, 0.0}, {}});
    REQUIRE(set.nodes.size() == 6);
    // Outer ring: 5 points at angles 2 pi k / 5 with zero offset.
    CHECK(set.nodes[0].x == doctest::Approx(1.0));
    CHECK(set.nodes[0].y == doctest::Approx(0.0));
    CHECK(set.nodes[1].x == doctest::Approx(std::cos(2.0 * std::numbers::pi / 5.0)));
    CHECK(set.nodes[5].x == 0.0);
    CHECK(set.nodes[5].y == 0.0);

    const NodeSet shifted = bos_array({1, {0.5}, {0.25}});
    CHECK(shifted.nodes[0].x == doctest::Approx(0.5 * std::cos(0.25)));

    CHECK_THROWS_AS(bos_array({2, {0.8, 0.8}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(bos_array({2, {0.3, 0.8}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(bos_array({3, {1.0, 0.5, 0.1}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(bos_array({3, {1.0, 0.0}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(bos_array({1, {0.0}, {}}), std::invalid_argument);
}

TEST_CASE("optimal concentric radii match reference values") {
    check_radii(ocs_radii(10), {0.9818, 0.8742, 0.6981, 0.4972, 0.2786, 0.0}, 5e-5);
    check_radii(ocs_radii(15), {0.9894, 0.9362, 0.8398, 0.7162, 0.5802, 0.4385, 0.2860, 0.1066}, 5e-5);
    CHECK(ocs_radii(10).back() == 0.0);
    CHECK(ocs_radii(0) == std::vector<double>{0.0});
    // n = 1: single ring from the zero cos(pi/4).
    const double x = std::cos(std::numbers::pi / 4.0);
    check_radii(ocs_radii(1), {1.1565 * x - 0.76535 * x * x + 0.60517 * x * x * x}, 1e-15);
    check_radii(ocs_radii(1), {0.6491}, 5e-5);
}

TEST_CASE("carnicer radii") {
    check_radii(carnicer_radii(10), {1.0, 0.9046, 0.7376, 0.5256, 0.2780, 0.0}, 5e-5);
    CHECK(std::abs(carnicer_radii(15)[1] - 0.9472) <= 5e-5);
    CHECK(carnicer_radii(10).front() == 1.0);
}

TEST_CASE("legendre zeros") {
    const auto z1 = legendre_zeros(1);
    REQUIRE(z1.size() == 1);
    CHECK(std::abs(z1[0]) < 1e-15);

    const auto z2 = legendre_zeros(2);
    REQUIRE(z2.size() == 2);
    CHECK(z2[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(z2[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));

    for (const int d : {11, 24, 31}) {
        const auto zeros = legendre_zeros(d);
        const auto reference = testing::gauss_legendre(d);
        REQUIRE(zeros.size() == static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            CHECK(std::abs(legendre_with_derivative(d, zeros[i]).first) < 1e-12);
            CHECK(std::abs(zeros[i] - reference.nodes[i]) < 1e-13);
        }
    }
}

TEST_CASE("cuyt radii are the non-negative Gauss-Lobatto abscissae") {
    check_radii(cuyt_radii(2), {1.0, 0.0}, 1e-15);
    check_radii(cuyt_radii(1), {1.0}, 0.0);
    // Interior Lobatto nodes for 11 points: zeros of P_10', computed independently.
    check_radii(cuyt_radii(10),
                {1.0, 9.340014304080594e-01, 7.844834736631440e-01, 5.652353269962055e-01, 2.957581355869397e-01, 0.0},
                1e-14);
    for (int n = 1; n <= 30; ++n) CHECK(cuyt_radii(n).size() == bos_ring_counts(n).size());
}

TEST_CASE("classic bos families have the right size and stay in the disk") {
    for (int n = 1; n <= 30; ++n) {
        for (const auto& set : {ocs_nodes(n), carnicer_nodes(n), cuyt_nodes(n)}) {
            CHECK(set.nodes.size() == basis_size(n));
            CHECK(inside_disk(set));
        }
    }
}

TEST_CASE("bos families are unisolvent up to order 30") {
    for (int n = 1; n <= 30; ++n) {
        for (const auto& set : {ocs_nodes(n), carnicer_nodes(n), cuyt_nodes(n)}) {
            const Eigen::VectorXd s = disk_singular_values(set);
            INFO("n = " << n << " scheme = " << to_string(set.scheme));
            CHECK(s.minCoeff() > 1e-8 * s.maxCoeff());
        }
    }
}

TEST_CASE("condition number is invariant under node permutation") {
    NodeSet set = ocs_nodes(9);
    const double before = disk_kappa(set);
    std::reverse(set.nodes.begin(), set.nodes.end());
    std::rotate(set.nodes.begin(), set.nodes.begin() + 7, set.nodes.end());
    CHECK(disk_kappa(set) == doctest::Approx(before).epsilon(1e-10));
}

TEST_CASE("spiral nodes") {
    const NodeSet one = spiral_nodes(1);
    REQUIRE(one.nodes.size() == 3);
    CHECK(one.nodes[0].x != one.nodes[1].x);
    for (int n = 1; n <= 20; ++n) {
        const NodeSet set = spiral_nodes(n);
        CHECK(set.nodes.size() == basis_size(n));
        CHECK(inside_disk(set));
    }
    // The sunflower ignores the boundary, so conditioning degrades quickly.
    CHECK(disk_kappa(spiral_nodes(15)) > 100.0 * disk_kappa(ocs_nodes(15)));
}

TEST_CASE("random thinned nodes are seeded and greedy") {
    const NodeSet a = random_thinned_nodes(8, 42);
    const NodeSet b = random_thinned_nodes(8, 42);
    const NodeSet c = random_thinned_nodes(8, 43);
    REQUIRE(a.nodes.size() == 45);
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        CHECK(a.nodes[i].x == b.nodes[i].x);
        CHECK(a.nodes[i].y == b.nodes[i].y);
    }
    CHECK(a.nodes[3].x != c.nodes[3].x);
    CHECK(inside_disk(a));

    // Rebuild the candidate cloud and check farthest-point selection directly.
    Xoshiro256 rng(42);
    std::vector<Point2> candidates;
    for (std::size_t i = 0; i < kThinningCandidates; ++i) {
        const double r = std::sqrt(rng.uniform());
        const double t = 2.0 * std::numbers::pi * rng.uniform();
        candidates.push_back({r * std::cos(t), r * std::sin(t)});
    }
    const auto distance_to_set = [&](Point2 p, std::size_t count) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < count; ++k) best = std::min(best, std::hypot(p.x - a.nodes[k].x, p.y - a.nodes[k].y));
        return best;
    };
    for (std::size_t k = 1; k < a.nodes.size(); ++k) {
        const double chosen = distance_to_set(a.nodes[k], k);
        double best = 0.0;
        for (const Point2& p : candidates) best = std::max(best, distance_to_set(p, k));
        CHECK(chosen == doctest::Approx(best).epsilon(1e-14));
    }

    const Eigen::VectorXd s = disk_singular_values(random_thinned_nodes(6, 7));
    CHECK(s.minCoeff() > 1e-8 * s.maxCoeff());
    CHECK_THROWS_AS(random_thinned_nodes(44, 1), std::invalid_argument);
}

TEST_CASE("approximate fekete points") {
    for (int n = 1; n <= 15; ++n) {
        const NodeSet set = approximate_fekete(n, std::max<std::size_t>(20 * basis_size(n), 4000));
        REQUIRE(set.nodes.size() == basis_size(n));
        CHECK(inside_disk(set));
        const Eigen::VectorXd s = disk_singular_values(set);
        CHECK(s.minCoeff() > 1e-8 * s.maxCoeff());
    }
    const double coarse = disk_kappa(approximate_fekete(8, 4000));
    const double fine = disk_kappa(approximate_fekete(8, 16000));
    CHECK(std::max(coarse, fine) / std::min(coarse, fine) <= 2.0);
    CHECK_THROWS_AS(approximate_fekete(8, 100), std::invalid_argument);
}

TEST_CASE("node file loading") {
    const NodeSet loaded = load_nodes(kData / "ocs_10.txt", 10);
    REQUIRE(loaded.nodes.size() == 66);
    CHECK(loaded.scheme == Scheme::FileLoaded);
    const NodeSet generated = ocs_nodes(10);
    for (std::size_t i = 0; i < 66; ++i) {
        CHECK(std::abs(loaded.nodes[i].x - generated.nodes[i].x) < 1e-14);
        CHECK(std::abs(loaded.nodes[i].y - generated.nodes[i].y) < 1e-14);
    }
    CHECK(disk_kappa(loaded) == doctest::Approx(4.339599209397084).epsilon(1e-9));

    CHECK_THROWS_AS(load_nodes(kData / "short_10.txt", 10), NodeCountError);
    CHECK_THROWS_AS(load_nodes(kData / "outside_10.txt", 10), NodeOutsideDiskError);
    CHECK_THROWS_AS(load_nodes(kData / "garbage_10.txt", 10), NodeFileParseError);
    CHECK_THROWS_AS(load_nodes(kData / "does_not_exist.txt", 10), NodeFileError);
}

TEST_CASE("node files round trip through the writer") {
    const NodeSet set = carnicer_nodes(7);
    std::stringstream buffer;
    write_nodes(buffer, set, "carnicer n=7");
    const NodeSet back = read_nodes(buffer, 7);
    REQUIRE(back.nodes.size() == set.nodes.size());
    for (std::size_t i = 0; i < set.nodes.size(); ++i) {
        CHECK(back.nodes[i].x == set.nodes[i].x);
        CHECK(back.nodes[i].y == set.nodes[i].y);
    }
}

TEST_CASE("generate_nodes dispatch") {
    CHECK(generate_nodes(Scheme::OCS, 4).nodes.size() == 15);
    CHECK(generate_nodes(Scheme::RandomThinned, 4, 9).nodes[0].x == random_thinned_nodes(4, 9).nodes[0].x);
    CHECK_THROWS_AS(generate_nodes(Scheme::FileLoaded, 4), std::invalid_argument);
    CHECK(to_string(Scheme::Carnicer) == "carnicer");
}
