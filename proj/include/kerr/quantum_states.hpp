/*
 * quantum_states.hpp - coherent and squeezed states of the xi-scaled oscillator.
 *
 * |alpha> = D(alpha)|0> with a|alpha> = alpha|alpha>, and the squeezed state
 * |tau alpha> = V(tau)|alpha> with V(tau) = exp[tau (a^+)^2 - tau* a^2],
 * tau = |tau| e^{i phi}. V acts on (q, p) by the positive symplectic matrix
 * S(tau) = R(phi) Lambda(s) R(-phi) with s = exp(-2 xi |tau|).
 */
#pragma once

#include <cmath>
#include <complex>

#include "kerr/errors.hpp"
#include "kerr/phase_space.hpp"
#include "kerr/symbol.hpp"

namespace kerr {

/// Reduce an angle to (-pi, pi].
inline double reduce_phase(double angle) {
    double r = std::remainder(angle, 2.0 * pi);  // [-pi, pi]
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

/// Reduce an angle to [0, 2 pi).
inline double wrap_phase(double angle) {
    double r = std::fmod(angle, 2.0 * pi);
    if (r < 0.0) r += 2.0 * pi;
    if (r >= 2.0 * pi) r = 0.0;
    return r;
}

struct CoherentParams {
    cplx alpha{};

    /// Coherent mean values (sqrt2 Re alpha, sqrt2 Im alpha).
    PhasePoint mean() const { return {std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag()}; }
    double phase() const { return wrap_phase(std::arg(alpha)); }
};

struct SqueezeParams {
    double magnitude = 0.0;  ///< |tau|
    double phase = 0.0;      ///< phi

    void validate() const {
        if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) throw InvalidState("squeeze magnitude must be >= 0");
        if (!std::isfinite(phase)) throw InvalidState("squeeze phase must be finite");
    }
    cplx tau() const { return std::polar(magnitude, phase); }
    /// s = exp(-2 xi |tau|)
    double s(double xi) const { return std::exp(-2.0 * xi * magnitude); }

    /// The squeeze parameter that yields a given s at deformation xi.
    static SqueezeParams from_s(double s, double phi, double xi) {
        if (!(s > 0.0 && s <= 1.0)) throw InvalidState("squeeze factor s must lie in (0, 1]");
        return {-std::log(s) / (2.0 * xi), phi};
    }
};

struct SqueezedState {
    CoherentParams coherent;
    SqueezeParams squeeze;
    double xi = 1.0;

    void validate() const {
        DeformationParameter{xi};
        squeeze.validate();
        if (!std::isfinite(coherent.alpha.real()) || !std::isfinite(coherent.alpha.imag()))
            throw InvalidState("coherent amplitude must be finite");
    }
    double s() const { return squeeze.s(xi); }
    /// Delta phi = phi - 2 arg(alpha) in (-pi, pi]; for alpha = 0 the phase of alpha is taken as 0.
    double delta_phi() const { return reduce_phase(squeeze.phase - 2.0 * std::arg(coherent.alpha)); }

    /// Common phase rotation by delta: alpha -> alpha e^{-i delta}, tau -> tau e^{-2 i delta}.
    SqueezedState phase_shifted(double delta) const {
        return {{coherent.alpha * std::exp(-I * delta)}, {squeeze.magnitude, squeeze.phase - 2.0 * delta}, xi};
    }
};

/// S(tau) from its explicit entries.
inline Mat2 squeeze_matrix(const SqueezeParams& sq, double xi) {
    const double s = sq.s(xi);
    const double c2 = std::pow(std::cos(sq.phase / 2.0), 2);
    const double s2 = std::pow(std::sin(sq.phase / 2.0), 2);
    const double off = -0.5 * (1.0 / s - s) * std::sin(sq.phase);
    Mat2 m;
    m << s * c2 + s2 / s, off, off, c2 / s + s * s2;
    return m;
}

/// S(tau) = R(phi) Lambda(s) R(-phi).
inline Mat2 squeeze_matrix_factored(const SqueezeParams& sq, double xi) {
    return rotation(sq.phase) * scaling(sq.s(xi)) * rotation(-sq.phase);
}

/// <q|alpha> = (pi xi)^{-1/4} exp[(-q^2/2 + sqrt2 alpha q - alpha Re alpha) / xi]
inline cplx coherent_wavefunction(cplx alpha, double xi, double q) {
    return std::pow(pi * xi, -0.25) * std::exp((-0.5 * q * q + std::sqrt(2.0) * alpha * q - alpha * alpha.real()) / xi);
}

/// <alpha|beta> = exp[-(|alpha|^2/2 + |beta|^2/2 - alpha* beta) / xi]
inline cplx coherent_overlap(cplx alpha, cplx beta, double xi) {
    return std::exp(-(0.5 * std::norm(alpha) + 0.5 * std::norm(beta) - std::conj(alpha) * beta) / xi);
}

inline double coherent_projector_symbol(cplx alpha, double xi, const PhasePoint& x) {
    const PhasePoint m = CoherentParams{alpha}.mean();
    return 2.0 * std::exp((-(x.q * x.q + x.p * x.p) + 2.0 * x.q * m.q + 2.0 * x.p * m.p - (m.q * m.q + m.p * m.p)) / xi);
}

inline double squeezed_projector_symbol(const SqueezedState& st, const PhasePoint& x) {
    const Vec2 xv = x.vec();
    const Vec2 mv = st.coherent.mean().vec();
    const Mat2 s1 = squeeze_matrix(st.squeeze, st.xi);
    const Mat2 s2 = squeeze_matrix({2.0 * st.squeeze.magnitude, st.squeeze.phase}, st.xi);
    return 2.0 * std::exp((-xv.dot(s2 * xv) + 2.0 * xv.dot(s1 * mv) - mv.dot(mv)) / st.xi);
}

/// The squeezed projector as a Gaussian symbol: 2 exp[(-x.S(2tau)x + 2x.S(tau)xbar - xbar.xbar) / xi].
inline GaussPolySymbol squeezed_projector_gaussian(const SqueezedState& st) {
    const Mat2 s1 = squeeze_matrix(st.squeeze, st.xi);
    const Mat2 s2 = s1 * s1;
    const Vec2 mv = st.coherent.mean().vec();
    return GaussPolySymbol(Poly2(2.0), (-s2 / st.xi).cast<cplx>(), (2.0 * s1 * mv / st.xi).cast<cplx>(),
                           -mv.squaredNorm() / st.xi);
}

struct Variances {
    double var_q;
    double var_p;
    double cov_f;  ///< symmetrized covariance <{q - <q>, p - <p>}_sym> / 2; var_q var_p - cov_f^2 = xi^2 / 4
};

inline Variances variances(const SqueezedState& st) {
    const double s = st.s(), xi = st.xi, phi = st.squeeze.phase;
    const double c2 = std::pow(std::cos(phi / 2.0), 2), s2 = std::pow(std::sin(phi / 2.0), 2);
    return {0.5 * xi * (c2 / (s * s) + s * s * s2), 0.5 * xi * (s * s * c2 + s2 / (s * s)),
            0.25 * xi * (1.0 / (s * s) - s * s) * std::sin(phi)};
}

/// <a^+ a> = xi sinh^2(2 xi |tau|) + |alpha cosh(2 xi |tau|) + alpha* e^{i phi} sinh(2 xi |tau|)|^2
inline double mean_photon_number(const SqueezedState& st) {
    const double r = 2.0 * st.xi * st.squeeze.magnitude;
    const cplx a = st.coherent.alpha;
    return st.xi * std::pow(std::sinh(r), 2) +
           std::norm(a * std::cosh(r) + std::conj(a) * std::exp(I * st.squeeze.phase) * std::sinh(r));
}

/// <a> at t = 0, the Bogoliubov mean alpha cosh r + alpha* e^{i phi} sinh r.
inline cplx initial_mean_a(const SqueezedState& st) {
    const double r = 2.0 * st.xi * st.squeeze.magnitude;
    return st.coherent.alpha * std::cosh(r) + std::conj(st.coherent.alpha) * std::exp(I * st.squeeze.phase) * std::sinh(r);
}

}  // namespace kerr
