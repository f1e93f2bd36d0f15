/*
 * symbol.hpp - the Gaussian-times-polynomial class of phase-space symbols.
 *
 *   f(x) = P(z, zbar) * exp(x^T A x + b . x + c)
 *
 * P is held in complex coordinates, the quadratic form A (complex
 * symmetric), linear term b and constant c in real (q, p) coordinates.
 * The class is closed under derivatives, star products and symplectic
 * pullbacks, which is what makes closed-form star products possible.
 */
#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "kerr/errors.hpp"
#include "kerr/phase_space.hpp"
#include "kerr/poly2.hpp"

namespace kerr {

using QuadForm = Eigen::Matrix2cd;
using LinForm = Eigen::Vector2cd;

class GaussPolySymbol {
public:
    GaussPolySymbol() : GaussPolySymbol(Poly2(1.0)) {}

    explicit GaussPolySymbol(Poly2 poly, QuadForm quad = QuadForm::Zero(), LinForm lin = LinForm::Zero(),
                             cplx constant = 0.0)
        : poly_(std::move(poly)), quad_(0.5 * (quad + quad.transpose())), lin_(std::move(lin)), constant_(constant) {}

    static GaussPolySymbol polynomial(Poly2 poly) { return GaussPolySymbol(std::move(poly)); }
    static GaussPolySymbol constant(cplx c) { return GaussPolySymbol(Poly2(c)); }

    const Poly2& poly() const noexcept { return poly_; }
    const QuadForm& quad() const noexcept { return quad_; }
    const LinForm& lin() const noexcept { return lin_; }
    cplx constant_term() const noexcept { return constant_; }

    /// True when the exponential factor is a constant (A = 0, b = 0).
    bool is_polynomial() const { return quad_.isZero(0.0) && lin_.isZero(0.0); }

    /// Polynomial part with exp(c) folded in; only meaningful for is_polynomial().
    Poly2 folded_poly() const { return poly_ * std::exp(constant_); }

    cplx operator()(const PhasePoint& x) const {
        const double q = x.q, p = x.p;
        const cplx e = quad_(0, 0) * q * q + 2.0 * quad_(0, 1) * q * p + quad_(1, 1) * p * p + lin_(0) * q +
                       lin_(1) * p + constant_;
        return poly_(x.z()) * std::exp(e);
    }

    /// x^T A x + b . x written as a polynomial in (z, zbar).
    Poly2 exponent_poly() const {
        const cplx a11 = quad_(0, 0), a12 = quad_(0, 1), a22 = quad_(1, 1);
        Poly2 e;
        e.add_term(2, 0, (a11 - a22 - 2.0 * I * a12) / 4.0);
        e.add_term(0, 2, (a11 - a22 + 2.0 * I * a12) / 4.0);
        e.add_term(1, 1, (a11 + a22) / 2.0);
        e.add_term(1, 0, (lin_(0) - I * lin_(1)) / 2.0);
        e.add_term(0, 1, (lin_(0) + I * lin_(1)) / 2.0);
        return e;
    }

    GaussPolySymbol d_dz() const {
        return with_poly(poly_.d_dz() + poly_ * exponent_poly().d_dz());
    }
    GaussPolySymbol d_dzbar() const {
        return with_poly(poly_.d_dzbar() + poly_ * exponent_poly().d_dzbar());
    }

    /// Pointwise complex conjugate (the involution of the symbol algebra).
    GaussPolySymbol conj() const {
        return GaussPolySymbol(poly_.conj(), quad_.conjugate(), lin_.conjugate(), std::conj(constant_));
    }

    GaussPolySymbol with_poly(Poly2 p) const { return GaussPolySymbol(std::move(p), quad_, lin_, constant_); }

    bool same_exponent(const GaussPolySymbol& o, double tol = 1e-13) const {
        const double scale = 1.0 + std::max(quad_.cwiseAbs().maxCoeff(), lin_.cwiseAbs().maxCoeff());
        return (quad_ - o.quad_).cwiseAbs().maxCoeff() <= tol * scale &&
               (lin_ - o.lin_).cwiseAbs().maxCoeff() <= tol * scale;
    }

    GaussPolySymbol& operator*=(cplx s) {
        poly_ *= s;
        return *this;
    }

    /// Sum of two symbols sharing the same (A, b); constants are folded into the polynomial.
    GaussPolySymbol& operator+=(const GaussPolySymbol& o) {
        if (!same_exponent(o))
            throw IncompatibleGaussians("cannot add symbols with different Gaussian exponents");
        poly_ += o.poly_ * std::exp(o.constant_ - constant_);
        return *this;
    }
    GaussPolySymbol& operator-=(const GaussPolySymbol& o) {
        if (!same_exponent(o))
            throw IncompatibleGaussians("cannot subtract symbols with different Gaussian exponents");
        poly_ -= o.poly_ * std::exp(o.constant_ - constant_);
        return *this;
    }

    friend GaussPolySymbol operator+(GaussPolySymbol a, const GaussPolySymbol& b) { return a += b; }
    friend GaussPolySymbol operator-(GaussPolySymbol a, const GaussPolySymbol& b) { return a -= b; }
    friend GaussPolySymbol operator*(GaussPolySymbol a, cplx s) { return a *= s; }
    friend GaussPolySymbol operator*(cplx s, GaussPolySymbol a) { return a *= s; }

    /// Product of two symbols (pointwise, not the star product).
    friend GaussPolySymbol pointwise_product(const GaussPolySymbol& a, const GaussPolySymbol& b) {
        return GaussPolySymbol(a.poly_ * b.poly_, a.quad_ + b.quad_, a.lin_ + b.lin_, a.constant_ + b.constant_);
    }

private:
    Poly2 poly_;
    QuadForm quad_;
    LinForm lin_;
    cplx constant_;
};

/// Polynomial symbols of the ladder operators: a = z / sqrt(2), abar = zbar / sqrt(2).
inline Poly2 ladder_a() { return Poly2::monomial(1, 0, 1.0 / std::sqrt(2.0)); }
inline Poly2 ladder_abar() { return Poly2::monomial(0, 1, 1.0 / std::sqrt(2.0)); }

}  // namespace kerr
