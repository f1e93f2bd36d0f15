/*
 * kerr_moyal.hpp - exact Weyl-symbol solution of the quantum Kerr oscillator.
 *
 * Hamiltonian H = w2 (a^+)^2 a^2 + w1 a^+ a with [a, a^+] = xi. The Weyl
 * symbol Theta_sm(t|x) of (a^+(t))^s a(t)^m is known in closed form:
 *
 *   Theta_sm = e^{-i(m-s) w1 t} sec(tt)^{s+m+1} exp(2i tt - i x^2 tan(tt) / xi)
 *              sum_l W(m,s,l) (-(xi/2) e^{-i tt} cos tt)^l abar^{s-l} a^{m-l}
 *
 * with reduced time tt = (m - s) xi w2 t and W(m,s,l) = s! m! / (l! (s-l)! (m-l)!).
 * The amplitude diverges whenever cos(tt) = 0; such times are reported as a
 * SingularTime value instead of an overflowing number.
 *
 * The module also carries the classical Kerr flow, the quantum phase of the
 * trajectory symbol Theta_01, its first-order semiclassical expansion and
 * finite-difference consistency checks of the Moyal equation of motion.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "kerr/errors.hpp"
#include "kerr/finite_difference.hpp"
#include "kerr/phase_space.hpp"
#include "kerr/poly2.hpp"
#include "kerr/symbol.hpp"

namespace kerr {

inline constexpr double kSingularThreshold = 1e-9;
inline constexpr int kDefaultIndexCap = 30;

struct KerrParams {
    double w1 = 1.0;  ///< linear (number operator) frequency
    double w2 = 1.0;  ///< Kerr coefficient
    double xi = 1.0;  ///< deformation parameter, > 0

    void validate() const {
        if (!std::isfinite(w1) || !std::isfinite(w2)) throw InvalidArgument("frequencies must be finite");
        DeformationParameter{xi};
    }
};

struct ObservableIndex {
    int s = 0;  ///< power of a^+
    int m = 0;  ///< power of a

    void validate(int cap = kDefaultIndexCap) const {
        if (s < 0 || m < 0) throw InvalidArgument("observable indices must be non-negative");
        if (s > cap || m > cap)
            throw IndexCapExceeded("observable index (" + std::to_string(s) + "," + std::to_string(m) +
                                   ") exceeds cap " + std::to_string(cap));
    }

    /// tt = (m - s) xi w2 t
    double reduced_time(double t, const KerrParams& k) const { return double(m - s) * k.xi * k.w2 * t; }
};

struct SingularTime {
    double reduced_time;
};

/// Value of Theta_sm(t|x), or the marker for a Moyal singularity.
class MoyalValue {
public:
    MoyalValue(cplx v) : v_(v) {}
    MoyalValue(SingularTime s) : v_(s) {}

    bool is_singular() const noexcept { return std::holds_alternative<SingularTime>(v_); }
    cplx value() const {
        if (is_singular()) throw SingularWindow(std::get<SingularTime>(v_).reduced_time);
        return std::get<cplx>(v_);
    }
    std::optional<cplx> try_value() const {
        if (is_singular()) return std::nullopt;
        return std::get<cplx>(v_);
    }
    double singular_reduced_time() const { return std::get<SingularTime>(v_).reduced_time; }

private:
    std::variant<cplx, SingularTime> v_;
};

inline bool in_singular_window(double reduced_time) { return std::abs(std::cos(reduced_time)) < kSingularThreshold; }

// ---------------------------------------------------------------------------
// Hamiltonian and number symbols

struct HamiltonianSplit {
    double classical;  ///< H_cl = w2 x^4 / 4 + w1 x^2 / 2
    double h1;         ///< -w2 x^2 - w1 / 2
    double h2;         ///< w2
};

inline double hamiltonian_symbol(const KerrParams& k, const PhasePoint& x) {
    const double x2 = x.norm2();
    return k.w2 * (0.25 * x2 * x2 - k.xi * x2 + 0.5 * k.xi * k.xi) + k.w1 * (0.5 * x2 - 0.5 * k.xi);
}

/// H = H_cl + xi h1 + xi^2 h2 / 2 exactly; the constants of h1, h2 never enter the dynamics.
inline HamiltonianSplit hamiltonian_split(const KerrParams& k, const PhasePoint& x) {
    const double x2 = x.norm2();
    return {0.25 * k.w2 * x2 * x2 + 0.5 * k.w1 * x2, -k.w2 * x2 - 0.5 * k.w1, k.w2};
}

inline double number_symbol(double xi, const PhasePoint& x) { return 0.5 * (x.norm2() - xi); }

/// Hamiltonian symbol as a polynomial in (z, zbar): x^2 = z zbar.
inline GaussPolySymbol hamiltonian_poly(const KerrParams& k) {
    Poly2 h;
    h.add_term(2, 2, 0.25 * k.w2);
    h.add_term(1, 1, -k.w2 * k.xi + 0.5 * k.w1);
    h.add_term(0, 0, 0.5 * k.w2 * k.xi * k.xi - 0.5 * k.w1 * k.xi);
    return GaussPolySymbol::polynomial(h);
}

inline GaussPolySymbol number_poly(double xi) {
    Poly2 n;
    n.add_term(1, 1, 0.5);
    n.add_term(0, 0, -0.5 * xi);
    return GaussPolySymbol::polynomial(n);
}

// ---------------------------------------------------------------------------
// Exact solution

namespace detail {

inline std::uint64_t exact_binomial(int n, int k) {
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * std::uint64_t(n - k + i) / std::uint64_t(i);
    return r;
}

}  // namespace detail

/// W(m,s,l) = s! m! / (l! (s-l)! (m-l)!); exact integers up to s, m <= 20.
inline double combinatorial_weight(int m, int s, int l) {
    if (l < 0 || l > s || l > m) return 0.0;
    if (s <= 20 && m <= 20) {
        std::uint64_t lf = 1;
        for (int i = 2; i <= l; ++i) lf *= std::uint64_t(i);
        return double(detail::exact_binomial(s, l) * detail::exact_binomial(m, l) * lf);
    }
    return std::exp(std::lgamma(s + 1.0) + std::lgamma(m + 1.0) - std::lgamma(l + 1.0) - std::lgamma(s - l + 1.0) -
                    std::lgamma(m - l + 1.0));
}

namespace detail {

/// sum_l W(m,s,l) lam^l abar^{s-l} a^{m-l} as a polynomial in (z, zbar).
inline Poly2 ladder_sum(const ObservableIndex& idx, cplx lam) {
    Poly2 r;
    const int lmax = std::min(idx.s, idx.m);
    cplx lam_l = 1.0;
    for (int l = 0; l <= lmax; ++l) {
        const int ks = idx.s - l, km = idx.m - l;
        r.add_term(km, ks, combinatorial_weight(idx.m, idx.s, l) * lam_l * std::pow(2.0, -0.5 * (ks + km)));
        lam_l *= lam;
    }
    return r;
}

}  // namespace detail

/// Theta_sm(0|x) as a polynomial.
inline Poly2 initial_symbol_poly(const ObservableIndex& idx, double xi) {
    idx.validate();
    return detail::ladder_sum(idx, -0.5 * xi);
}

inline cplx initial_symbol(const ObservableIndex& idx, double xi, const PhasePoint& x) {
    return initial_symbol_poly(idx, xi)(x.z());
}

inline MoyalValue moyal_solution(const ObservableIndex& idx, double t, const PhasePoint& x, const KerrParams& k) {
    idx.validate();
    const double tt = idx.reduced_time(t, k);
    const double c = std::cos(tt);
    if (idx.s != idx.m && std::abs(c) < kSingularThreshold) return SingularTime{tt};

    const int dm = idx.m - idx.s;
    const cplx lam = -0.5 * k.xi * std::exp(-I * tt) * c;
    const cplx a = x.z() / std::sqrt(2.0);
    const cplx abar = std::conj(a);

    cplx sum{};
    cplx lam_l = 1.0;
    for (int l = 0; l <= std::min(idx.s, idx.m); ++l) {
        sum += combinatorial_weight(idx.m, idx.s, l) * lam_l * std::pow(abar, idx.s - l) * std::pow(a, idx.m - l);
        lam_l *= lam;
    }
    const double amp = std::pow(c, -(idx.s + idx.m + 1));
    const cplx phase = std::exp(-I * (double(dm) * k.w1 * t) + I * (2.0 * tt - x.norm2() * std::tan(tt) / k.xi));
    return amp * phase * sum;
}

/// Theta_sm(t|.) as a GaussPolySymbol with A = -(i/xi) tan(tt) I.
inline GaussPolySymbol moyal_solution_symbolic(const ObservableIndex& idx, double t, const KerrParams& k) {
    idx.validate();
    const double tt = idx.reduced_time(t, k);
    const double c = std::cos(tt);
    if (idx.s != idx.m && std::abs(c) < kSingularThreshold) throw SingularWindow(tt);

    const cplx lam = -0.5 * k.xi * std::exp(-I * tt) * c;
    const cplx pref = std::pow(c, -(idx.s + idx.m + 1)) *
                      std::exp(-I * (double(idx.m - idx.s) * k.w1 * t) + 2.0 * I * tt);
    const QuadForm quad = (-I * std::tan(tt) / k.xi) * QuadForm::Identity();
    return GaussPolySymbol(detail::ladder_sum(idx, lam) * pref, quad);
}

// ---------------------------------------------------------------------------
// Residual checks of the Moyal equation

struct MoyalResidual {
    double eqm;          ///< |dTheta/dt + i(m-s)(w2 K + w1) Theta| / |Theta|
    double third_order;  ///< third-order form with (x . J d_x), relative to |Theta| + |dTheta/dt|
    double eigenvalue;   ///< |(x . J d_x) Theta - i(m-s) Theta| / |Theta|
};

inline double default_space_step(const PhasePoint& x) { return 1e-4 * std::max(1.0, std::sqrt(x.norm2())); }

/// Finite-difference residuals of the second-order (reduced) and third-order
/// Moyal equations, with K = x^2 - 2 xi - (xi^2 / 4) Laplacian.
inline MoyalResidual moyal_residual(const ObservableIndex& idx, double t, const PhasePoint& x, const KerrParams& k,
                                    double h_t = 0.0, double h_x = 0.0) {
    idx.validate();
    if (h_x <= 0.0) h_x = default_space_step(x);
    if (h_t <= 0.0) {
        // Keep h_t times the local phase rate of Theta small; the rate grows like sec^2 near a pole.
        const double c = std::cos(idx.reduced_time(t, k));
        const double rate = std::abs(idx.m - idx.s) *
                            (std::abs(k.w2) * (k.xi + x.norm2()) / (c * c) + std::abs(k.w2) * k.xi + std::abs(k.w1));
        h_t = 1e-4 / std::max(1.0, rate);
    }
    for (double tau : {t - h_t, t, t + h_t})
        if (idx.s != idx.m && in_singular_window(idx.reduced_time(tau, k)))
            throw SingularWindow(idx.reduced_time(tau, k));

    auto theta = [&](double tau, double q, double p) { return moyal_solution(idx, tau, {q, p}, k).value(); };
    const cplx th = theta(t, x.q, x.p);
    const double norm = std::abs(th) > 0.0 ? std::abs(th) : 1.0;
    const cplx lam = I * double(idx.m - idx.s);

    const cplx dt = fd::central1([&](double tau) { return theta(tau, x.q, x.p); }, t, h_t);

    auto laplacian = [&](auto&& f, double q, double p, double h) {
        return fd::central2_o4([&](double u) { return f(u, p); }, q, h) +
               fd::central2_o4([&](double u) { return f(q, u); }, p, h);
    };
    auto theta_t = [&](double q, double p) { return theta(t, q, p); };

    const cplx k_theta = (x.norm2() - 2.0 * k.xi) * th - 0.25 * k.xi * k.xi * laplacian(theta_t, x.q, x.p, h_x);
    const double eqm = std::abs(dt + lam * (k.w2 * k_theta + k.w1 * th)) / norm;

    // (x . J d_x) f = q df/dp - p df/dq
    auto angular = [&](double q, double p, double h) {
        return q * fd::central1_o4([&](double u) { return theta_t(q, u); }, p, h) -
               p * fd::central1_o4([&](double u) { return theta_t(u, p); }, q, h);
    };
    const double eigen = std::abs(angular(x.q, x.p, h_x) - lam * th) / norm;

    // Nested stencils lose digits as 1/h^3; use a coarser step for the third-order form.
    // The Gaussian factor oscillates in x with local wavenumber 2 |x| |tan tt| / xi.
    const double wavenumber = 2.0 * std::sqrt(x.norm2()) * std::abs(std::tan(idx.reduced_time(t, k))) / k.xi;
    const double h3 =
        std::max(h_x, std::min(1e-3 * std::max(1.0, std::sqrt(x.norm2())), 0.05 / std::max(wavenumber, 1e-300)));
    auto ang3 = [&](double q, double p) { return angular(q, p, h3); };
    const cplx d_theta = ang3(x.q, x.p);
    const cplx k_d = (x.norm2() - 2.0 * k.xi) * d_theta - 0.25 * k.xi * k.xi * laplacian(ang3, x.q, x.p, h3);
    // Normalized by the size of the time-derivative term, which dominates near a pole.
    const double third = std::abs(dt + (k.w2 * k_d + k.w1 * d_theta)) / (norm + std::abs(dt));

    return {eqm, third, eigen};
}

struct AnsatzResidual {
    cplx g;
    double f;
    double residual_g;  ///< |g' - i m w2 (-1 + xi^2 g^2)|
    double residual_f;  ///< |f' - i m (m+1) xi^2 w2 g f|
};

/// Checks g(t) = -(i/xi) tan(m xi w2 t), f(t) = sec^{m+1}(m xi w2 t) against their ODEs.
inline AnsatzResidual ansatz_ode_check(int m, double t, const KerrParams& k, double h_t = 1e-5) {
    auto arg = [&](double tau) { return double(m) * k.xi * k.w2 * tau; };
    for (double tau : {t - h_t, t, t + h_t})
        if (in_singular_window(arg(tau))) throw SingularWindow(arg(tau));
    auto g = [&](double tau) { return cplx(-I * std::tan(arg(tau)) / k.xi); };
    auto f = [&](double tau) { return std::pow(std::cos(arg(tau)), -(m + 1)); };

    const cplx gv = g(t);
    const double fv = f(t);
    const cplx dg = fd::central1(g, t, h_t);
    const double df = fd::central1(f, t, h_t);
    const double rg = std::abs(dg - I * double(m) * k.w2 * (-1.0 + k.xi * k.xi * gv * gv));
    const double rf = std::abs(df - I * double(m * (m + 1)) * k.xi * k.xi * k.w2 * gv * fv);
    return {gv, fv, rg, rf};
}

// ---------------------------------------------------------------------------
// Classical and quantum trajectories

struct ClassicalState {
    double q_cl;
    double p_cl;

    Vec2 vec() const { return {q_cl, p_cl}; }
    /// a_cl = (q_cl + i p_cl) / sqrt(2)
    cplx a_cl() const { return cplx(q_cl, p_cl) / std::sqrt(2.0); }
};

/// Z_cl(t|x) = exp(t (w2 x^2 + w1) J) x: rotation with amplitude-dependent frequency.
inline ClassicalState classical_flow(double t, const PhasePoint& x, const KerrParams& k) {
    const double angle = (k.w2 * x.norm2() + k.w1) * t;
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * x.q + s * x.p, -s * x.q + c * x.p};
}

/// Phi = 2 xi w2 t + x^2 (w2 t - tan(xi w2 t) / xi)
inline double quantum_phase(double t, const PhasePoint& x, const KerrParams& k) {
    const double arg = k.xi * k.w2 * t;
    if (in_singular_window(arg)) throw SingularWindow(arg);
    return 2.0 * arg + x.norm2() * (k.w2 * t - std::tan(arg) / k.xi);
}

/// Theta_01 = sec^2(xi w2 t) e^{i Phi} a_cl, with [q(t)]_w = sqrt2 Re, [p(t)]_w = sqrt2 Im.
struct QuantumTrajectory {
    cplx theta01;

    double q() const { return std::sqrt(2.0) * theta01.real(); }
    double p() const { return std::sqrt(2.0) * theta01.imag(); }
};

inline QuantumTrajectory quantum_trajectory(double t, const PhasePoint& x, const KerrParams& k) {
    const double arg = k.xi * k.w2 * t;
    if (in_singular_window(arg)) throw SingularWindow(arg);
    const double sec = 1.0 / std::cos(arg);
    return {sec * sec * std::exp(I * quantum_phase(t, x, k)) * classical_flow(t, x, k).a_cl()};
}

/// order 0: a_cl; order 1: a_cl (1 + 2 i w2 t xi).
inline cplx semiclassical_trajectory(double t, const PhasePoint& x, const KerrParams& k, int order) {
    const cplx acl = classical_flow(t, x, k).a_cl();
    if (order == 0) return acl;
    if (order == 1) return acl * (1.0 + 2.0 * I * k.w2 * t * k.xi);
    throw InvalidArgument("semiclassical order must be 0 or 1");
}

/// z1 = d/dxi Z(t, xi|x) at xi = 0, which is -2 w2 t J Z_cl(t|x).
inline Vec2 flow_correction_z1(double t, const PhasePoint& x, const KerrParams& k) {
    return -2.0 * k.w2 * t * (poisson_matrix() * classical_flow(t, x, k).vec());
}

/// Residual of [d/dt - J H_cl''(Z_cl)] z1 = J grad h1(Z_cl), with d/dt by central difference.
inline double jacobi_residual(double t, const PhasePoint& x, const KerrParams& k, double h_t = 1e-5) {
    const Mat2 j = poisson_matrix();
    const Vec2 z = classical_flow(t, x, k).vec();
    const double r2 = z.squaredNorm();
    const Mat2 hessian = (k.w2 * r2 + k.w1) * Mat2::Identity() + 2.0 * k.w2 * z * z.transpose();
    const Vec2 grad_h1 = -2.0 * k.w2 * z;

    const Vec2 dz1 = (flow_correction_z1(t + h_t, x, k) - flow_correction_z1(t - h_t, x, k)) / (2.0 * h_t);
    const Vec2 lhs = dz1 - j * hessian * flow_correction_z1(t, x, k);
    return (lhs - j * grad_h1).norm();
}

}  // namespace kerr
