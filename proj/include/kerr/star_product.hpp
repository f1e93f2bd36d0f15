/*
 * star_product.hpp - star products, brackets and traces on GaussPolySymbol.
 *
 * Two independent engines compute f * g:
 *
 *   star_differential  the Groenewold series exp(i xi/2 d1.J d2), which in
 *                      complex coordinates reads
 *                        sum_{j,k} xi^{j+k} (-1)^k / (j! k!)
 *                          (dz^j dzbar^k f)(dzbar^j dz^k g)
 *                      and terminates when f is a polynomial;
 *   star_gaussian      the Berezin double integral over (x1, x2), done in
 *                      closed form as a 4-dimensional complex Gaussian with
 *                      Wick moments for the polynomial prefactors.
 *
 * Fresnel (pure phase) integrals are taken as the eps -> 0+ limit of the
 * integrand damped by exp(-eps |y|^2). The eigenvalues of the damped
 * quadratic form move in from +infinity inside the closed right half
 * plane, so the continued square root of the determinant is the product
 * of principal square roots of the eigenvalues.
 */
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "kerr/errors.hpp"
#include "kerr/gaussian_moments.hpp"
#include "kerr/phase_space.hpp"
#include "kerr/poly2.hpp"
#include "kerr/symbol.hpp"

namespace kerr {

namespace detail {

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Groenewold series with a polynomial left factor.
inline GaussPolySymbol groenewold_left(const Poly2& f, const GaussPolySymbol& g, double xi) {
    Poly2 acc;
    const int jmax = f.degree_z();
    const int kmax = f.degree_zbar();
    GaussPolySymbol g_j = g;  // dzbar^j g
    Poly2 f_j = f;            // dz^j f
    for (int j = 0; j <= jmax; ++j) {
        GaussPolySymbol g_jk = g_j;
        Poly2 f_jk = f_j;
        for (int k = 0; k <= kmax; ++k) {
            if (!f_jk.is_zero()) {
                const double coef = std::pow(xi, j + k) * ((k % 2) ? -1.0 : 1.0) / (factorial(j) * factorial(k));
                acc += (f_jk * g_jk.poly()) * coef;
            }
            f_jk = f_jk.d_dzbar();
            g_jk = g_jk.d_dz();
        }
        f_j = f_j.d_dz();
        g_j = g_j.d_dzbar();
    }
    return g.with_poly(std::move(acc));
}

/// Groenewold series with a polynomial right factor.
inline GaussPolySymbol groenewold_right(const GaussPolySymbol& f, const Poly2& g, double xi) {
    Poly2 acc;
    const int jmax = g.degree_zbar();
    const int kmax = g.degree_z();
    GaussPolySymbol f_j = f;  // dz^j f
    Poly2 g_j = g;            // dzbar^j g
    for (int j = 0; j <= jmax; ++j) {
        GaussPolySymbol f_jk = f_j;
        Poly2 g_jk = g_j;
        for (int k = 0; k <= kmax; ++k) {
            if (!g_jk.is_zero()) {
                const double coef = std::pow(xi, j + k) * ((k % 2) ? -1.0 : 1.0) / (factorial(j) * factorial(k));
                acc += (f_jk.poly() * g_jk) * coef;
            }
            f_jk = f_jk.d_dzbar();
            g_jk = g_jk.d_dz();
        }
        f_j = f_j.d_dz();
        g_j = g_j.d_dzbar();
    }
    return f.with_poly(std::move(acc));
}

/// (z, zbar) = Tc (q, p)
inline Eigen::Matrix2cd complex_coords() {
    Eigen::Matrix2cd t;
    t << 1.0, I, 1.0, -I;
    return t;
}

/// (q, p) = U (z, zbar)
inline Eigen::Matrix2cd real_coords() {
    Eigen::Matrix2cd u;
    u << 0.5, 0.5, -0.5 * I, 0.5 * I;
    return u;
}

/// sqrt(det M) on the eps -> 0+ continuation branch; validates the form.
template <class Matrix>
cplx continued_sqrt_det(const Matrix& m, const char* what) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(m), false);
    const auto& ev = es.eigenvalues();
    double largest = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) largest = std::max(largest, std::abs(ev(i)));
    cplx root = 1.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const cplx lam = ev(i);
        if (std::abs(lam) <= 1e-11 * largest || largest == 0.0)
            throw DegenerateQuadraticForm(std::string(what) + ": quadratic form is singular");
        if (lam.real() < -1e-10 * largest)
            throw DivergentIntegral(std::string(what) + ": Gaussian weight grows in some direction");
        root *= std::sqrt(lam);
    }
    return root;
}

}  // namespace detail

/// f * g by the terminating Groenewold series; f must be a polynomial symbol.
inline GaussPolySymbol star_differential(const GaussPolySymbol& f, const GaussPolySymbol& g, DeformationParameter xi) {
    if (!f.is_polynomial())
        throw NonPolynomialSymbol("star_differential needs a polynomial left factor; use star_gaussian");
    return detail::groenewold_left(f.folded_poly(), g, xi);
}

/// f * g by the Berezin integral, evaluated in closed form.
inline GaussPolySymbol star_gaussian(const GaussPolySymbol& f, const GaussPolySymbol& g, DeformationParameter xi_p) {
    const double xi = xi_p;
    const Eigen::Matrix2cd j = poisson_matrix().cast<cplx>();

    Eigen::Matrix4cd q = Eigen::Matrix4cd::Zero();
    q.block<2, 2>(0, 0) = f.quad();
    q.block<2, 2>(2, 2) = g.quad();
    q.block<2, 2>(0, 2) = (I / xi) * j;
    q.block<2, 2>(2, 0) = (I / xi) * j.transpose();
    const Eigen::Matrix4cd m = -2.0 * q;

    Eigen::Matrix<cplx, 4, 2> k;
    k.block<2, 2>(0, 0) = -(2.0 * I / xi) * j;
    k.block<2, 2>(2, 0) = (2.0 * I / xi) * j;
    Eigen::Vector4cd v0;
    v0 << f.lin(), g.lin();

    const cplx sqrt_det = detail::continued_sqrt_det(m, "star_gaussian");
    const Eigen::Matrix4cd minv = m.partialPivLu().inverse();

    const Eigen::Matrix2cd a_res = 0.5 * (k.transpose() * minv * k);
    const Eigen::Vector2cd b_res = k.transpose() * minv * v0;
    const cplx c_res = f.constant_term() + g.constant_term() + 0.5 * (v0.transpose() * minv * v0)(0, 0);
    const cplx prefactor = 4.0 / (xi * xi * sqrt_det);

    // Moments in w = (z1, zbar1, z2, zbar2).
    Eigen::Matrix4cd t = Eigen::Matrix4cd::Zero();
    t.block<2, 2>(0, 0) = detail::complex_coords();
    t.block<2, 2>(2, 2) = detail::complex_coords();
    const Eigen::Vector4cd mean_const = t * minv * v0;
    const Eigen::Matrix<cplx, 4, 2> mean_lin = t * minv * k * detail::real_coords();
    const Eigen::Matrix4cd cov = t * minv * t.transpose();

    std::vector<Poly2> mean(4);
    for (int a = 0; a < 4; ++a) {
        mean[std::size_t(a)].add_term(0, 0, mean_const(a));
        mean[std::size_t(a)].add_term(1, 0, mean_lin(a, 0));
        mean[std::size_t(a)].add_term(0, 1, mean_lin(a, 1));
    }
    detail::ShiftedMoments moments(std::move(mean), cov);

    Poly2 poly;
    for (const auto& [kf, cf] : f.poly().terms())
        for (const auto& [kg, cg] : g.poly().terms())
            poly += moments.expectation({kf.first, kf.second, kg.first, kg.second}) * (cf * cg);
    poly *= prefactor;
    return GaussPolySymbol(std::move(poly), a_res, b_res, c_res);
}

/// f * g with the cheapest applicable engine.
inline GaussPolySymbol star(const GaussPolySymbol& f, const GaussPolySymbol& g, DeformationParameter xi) {
    if (f.is_polynomial()) return detail::groenewold_left(f.folded_poly(), g, xi);
    if (g.is_polynomial()) return detail::groenewold_right(f, g.folded_poly(), xi);
    return star_gaussian(f, g, xi);
}

/// {f, g}_M = (f * g - g * f) / (i xi)
inline GaussPolySymbol moyal_bracket(const GaussPolySymbol& f, const GaussPolySymbol& g, DeformationParameter xi) {
    const GaussPolySymbol fg = star(f, g, xi);
    const GaussPolySymbol gf = star(g, f, xi);
    if (!fg.same_exponent(gf, 1e-9))
        throw IncompatibleGaussians("moyal_bracket: f*g and g*f carry different Gaussian exponents");
    // Align the (numerically equal) exponents before subtracting.
    const GaussPolySymbol gf_aligned(gf.poly(), fg.quad(), fg.lin(), gf.constant_term());
    return (fg - gf_aligned) * (1.0 / (I * double(xi)));
}

/// Classical Poisson bracket dq f dp g - dp f dq g = 2i (dzbar f dz g - dz f dzbar g).
inline GaussPolySymbol poisson_bracket(const GaussPolySymbol& f, const GaussPolySymbol& g) {
    const GaussPolySymbol t1 = pointwise_product(f.d_dzbar(), g.d_dz());
    const GaussPolySymbol t2 = pointwise_product(f.d_dz(), g.d_dzbar());
    return (t1 - t2) * (2.0 * I);
}

/// integral of f(x) g(x) d^2x = (2 pi xi) Tr f^ g^, in closed form.
inline cplx phase_space_inner_product(const GaussPolySymbol& f, const GaussPolySymbol& g) {
    const GaussPolySymbol fg = pointwise_product(f, g);
    const Eigen::Matrix2cd m = -2.0 * fg.quad();
    const cplx sqrt_det = detail::continued_sqrt_det(m, "phase_space_inner_product");
    const Eigen::Matrix2cd minv = m.inverse();
    const Eigen::Vector2cd b = fg.lin();

    const Eigen::Matrix2cd t = detail::complex_coords();
    const Eigen::Vector2cd mean = t * minv * b;
    std::vector<Poly2> means{Poly2(mean(0)), Poly2(mean(1))};
    detail::ShiftedMoments moments(std::move(means), t * minv * t.transpose());

    cplx poly_mean{};
    for (const auto& [k, c] : fg.poly().terms()) poly_mean += c * moments.expectation({k.first, k.second}).coeff(0, 0);
    return 2.0 * pi / sqrt_det * std::exp(0.5 * (b.transpose() * minv * b)(0, 0) + fg.constant_term()) * poly_mean;
}

/// x -> f(S x) for symplectic S; the Weyl symbol of V f^ V^dagger when V x^ V^dagger = S x^.
inline GaussPolySymbol symplectic_pullback(const GaussPolySymbol& f, const Mat2& s) {
    require_symplectic(s);
    // z' = (S x)_1 + i (S x)_2 = lam z + mu zbar
    const cplx row = s(0, 0) + I * s(1, 0);
    const cplx col = s(0, 1) + I * s(1, 1);
    const cplx lam = 0.5 * row - 0.5 * I * col;
    const cplx mu = 0.5 * row + 0.5 * I * col;
    Poly2 zs, zbs;
    zs.add_term(1, 0, lam);
    zs.add_term(0, 1, mu);
    zbs.add_term(0, 1, std::conj(lam));
    zbs.add_term(1, 0, std::conj(mu));
    const Eigen::Matrix2cd sc = s.cast<cplx>();
    return GaussPolySymbol(f.poly().substitute(zs, zbs), sc.transpose() * f.quad() * sc,
                           sc.transpose() * f.lin(), f.constant_term());
}

}  // namespace kerr
