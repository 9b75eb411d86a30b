#include "zernike/zernike.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace zernike {

namespace {

void require_valid(ZernikeIndex index) {
    if (!is_valid(index)) {
        throw std::invalid_argument("invalid Zernike index (n=" + std::to_string(index.n) +
                                    ", m=" + std::to_string(index.m) + ")");
    }
    if (index.n > kMaxRadialOrder) {
        throw std::invalid_argument("radial order " + std::to_string(index.n) +
                                    " exceeds supported maximum");
    }
}

}  // namespace

PolarPoint to_polar(Point2 p) {
    if (p.x == 0.0 && p.y == 0.0) return {0.0, 0.0};
    return {std::hypot(p.x, p.y), std::atan2(p.y, p.x)};
}

Point2 to_cartesian(PolarPoint p) { return {p.rho * std::cos(p.theta), p.rho * std::sin(p.theta)}; }

bool is_valid(ZernikeIndex index) {
    return index.n >= 0 && std::abs(index.m) <= index.n && (index.n - index.m) % 2 == 0;
}

int nm_to_index(int n, int m) {
    require_valid({n, m});
    return (n * (n + 2) + m) / 2;
}

ZernikeIndex index_to_nm(int j) {
    if (j < 0) throw std::invalid_argument("negative Zernike single index");
    // Order n holds indices [n(n+1)/2, (n+1)(n+2)/2).
    int n = static_cast<int>((std::sqrt(8.0 * j + 1.0) - 1.0) / 2.0);
    while (static_cast<long>(n + 1) * (n + 2) / 2 <= j) ++n;
    while (static_cast<long>(n) * (n + 1) / 2 > j) --n;
    return {n, 2 * j - n * (n + 2)};
}

std::size_t basis_size(int n) {
    if (n < 0) throw std::invalid_argument("negative radial order");
    return static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 2) / 2;
}

double radial_poly(ZernikeIndex index, double rho) {
    require_valid(index);
    const int am = std::abs(index.m);
    const int k = (index.n - am) / 2;

    // R_n^m(rho) = rho^|m| P_k^(0,|m|)(2 rho^2 - 1), k = (n - |m|) / 2. The Jacobi
    // three-term recurrence avoids the cancellation of the explicit factorial sum,
    // whose alternating terms reach ~1e4 already at n = 12.
    const double x = 2.0 * rho * rho - 1.0;
    const double b = am;
    double previous = 1.0;
    double current = 1.0 + 0.5 * (b + 2.0) * (x - 1.0);
    if (k == 0) current = 1.0;
    for (int i = 2; i <= k; ++i) {
        const double s = 2.0 * i + b;
        const double next = ((s - 1.0) * (s * (s - 2.0) * x - b * b) * current -
                             2.0 * (i - 1.0) * (i + b - 1.0) * s * previous) /
                            (2.0 * i * (i + b) * (s - 2.0));
        previous = current;
        current = next;
    }
    return am == 0 ? current : current * std::pow(rho, am);
}

double normalization(ZernikeIndex index) {
    require_valid(index);
    return std::sqrt(2.0 * (index.n + 1) / (index.m == 0 ? 2.0 : 1.0));
}

double zernike(ZernikeIndex index, PolarPoint p) {
    const double radial = normalization(index) * radial_poly(index, p.rho);
    if (index.m > 0) return radial * std::cos(index.m * p.theta);
    if (index.m < 0) return radial * std::sin(-index.m * p.theta);
    return radial;
}

double zernike(int j, PolarPoint p) { return zernike(index_to_nm(j), p); }

double zernike(int j, Point2 p) { return zernike(index_to_nm(j), to_polar(p)); }

void zernike_all(Point2 p, std::span<double> out) {
    const PolarPoint polar = to_polar(p);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = zernike(index_to_nm(static_cast<int>(j)), polar);
}

}  // namespace zernike
