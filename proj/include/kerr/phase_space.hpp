/*
 * phase_space.hpp - points and linear maps of the dimensionless phase plane.
 *
 * A phase point x = (q, p) doubles as the complex coordinate z = q + i p.
 * Linear maps are plain 2x2 real matrices; the helpers here build the
 * rotations R(phi) = exp(-phi J / 2) and scalings Lambda(s) used for
 * squeezing, and check the symplectic condition S J S^T = J.
 */
#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "kerr/errors.hpp"

namespace kerr {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

struct PhasePoint {
    double q = 0.0;
    double p = 0.0;

    static PhasePoint from_z(cplx z) { return {z.real(), z.imag()}; }
    static PhasePoint from_vec(const Vec2& v) { return {v(0), v(1)}; }

    cplx z() const { return {q, p}; }
    cplx zbar() const { return {q, -p}; }
    double norm2() const { return q * q + p * p; }
    Vec2 vec() const { return {q, p}; }

    friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Poisson matrix J = [[0, 1], [-1, 0]].
inline Mat2 poisson_matrix() {
    Mat2 j;
    j << 0.0, 1.0, -1.0, 0.0;
    return j;
}

/// x1 ^ x2 = x1 . J x2
inline double wedge(const PhasePoint& a, const PhasePoint& b) { return a.q * b.p - a.p * b.q; }

/// Rotation R(phi) by +phi/2: acts on z as multiplication by exp(i phi / 2).
inline Mat2 rotation(double phi) {
    const double c = std::cos(phi / 2.0);
    const double s = std::sin(phi / 2.0);
    Mat2 r;
    r << c, -s, s, c;
    return r;
}

inline Mat2 scaling(double s) {
    Mat2 l;
    l << s, 0.0, 0.0, 1.0 / s;
    return l;
}

inline PhasePoint apply(const Mat2& m, const PhasePoint& x) { return PhasePoint::from_vec(m * x.vec()); }

inline bool is_symplectic(const Mat2& s, double tol = 1e-12) {
    const Mat2 j = poisson_matrix();
    return (s * j * s.transpose() - j).cwiseAbs().maxCoeff() <= tol;
}

inline void require_symplectic(const Mat2& s, double tol = 1e-12) {
    if (!is_symplectic(s, tol)) throw NotSymplectic("matrix does not satisfy S J S^T = J");
}

/// Strictly positive deformation parameter (plays the role of hbar).
class DeformationParameter {
public:
    explicit DeformationParameter(double xi) : xi_(xi) {
        if (!(xi > 0.0) || !std::isfinite(xi))
            throw InvalidArgument("deformation parameter must be a finite positive number");
    }
    double value() const noexcept { return xi_; }
    operator double() const noexcept { return xi_; }

private:
    double xi_;
};

}  // namespace kerr
