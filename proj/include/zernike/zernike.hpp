#pragma once

// Zernike circle polynomials on the unit disk.
//
// Single-index convention: j = (n(n+2) + m) / 2, so that j = 0 is the piston
// term, j = 1, 2 are the tilts (m = -1, +1), j = 3..5 are n = 2, and so on.
// Other conventions (Noll, Wyant) exist; this library uses only this one.
//
// Normalization: N_n^m = sqrt(2(n+1) / (1 + delta_{m,0})), which makes the
// family orthonormal under (1/pi) * dx dy on the unit disk.

#include <cstddef>
#include <span>

namespace zernike {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct PolarPoint {
    double rho = 0.0;
    double theta = 0.0;
};

/// Polar coordinates via atan2, so theta lies in (-pi, pi]. The origin maps to theta = 0.
PolarPoint to_polar(Point2 p);
Point2 to_cartesian(PolarPoint p);

struct ZernikeIndex {
    int n = 0;
    int m = 0;

    friend bool operator==(const ZernikeIndex&, const ZernikeIndex&) = default;
};

bool is_valid(ZernikeIndex index);

/// Throws std::invalid_argument when (n, m) is not a valid pair.
int nm_to_index(int n, int m);
ZernikeIndex index_to_nm(int j);

/// Number of polynomials of radial order <= n, (n+1)(n+2)/2.
std::size_t basis_size(int n);

/// Largest radial order accepted by the evaluators.
inline constexpr int kMaxRadialOrder = 80;

/// R_n^m(rho), unnormalized (R_n^m(1) = 1). Any real rho is accepted.
double radial_poly(ZernikeIndex index, double rho);
double normalization(ZernikeIndex index);

double zernike(ZernikeIndex index, PolarPoint p);
double zernike(int j, PolarPoint p);
double zernike(int j, Point2 p);

/// Writes Z_0..Z_{out.size()-1} at p into out. Bit-identical to calling zernike() per index.
void zernike_all(Point2 p, std::span<double> out);

}  // namespace zernike
