/*
 * fock_oracle.hpp - truncated number-basis representation used as ground truth.
 *
 * Basis |n>, n = 0..dim-1, with a|n> = sqrt(xi n)|n-1>, so [a, a^+] = xi on
 * every diagonal entry except the last. The Kerr Hamiltonian is diagonal,
 * E_n = w2 xi^2 n(n-1) + w1 xi n, so time evolution is exact elementwise
 * phase multiplication.
 *
 * The ladder operators are banded; state preparation and expectation values
 * work directly on vectors. Dense matrices are built only on request (small
 * dim checks).
 */
#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "kerr/errors.hpp"
#include "kerr/kerr_moyal.hpp"
#include "kerr/phase_space.hpp"
#include "kerr/quantum_states.hpp"

namespace kerr {

inline constexpr int kDefaultFockCap = 4096;
inline constexpr double kTailTolerance = 1e-12;

using FockVector = Eigen::VectorXcd;
using FockMatrix = Eigen::MatrixXcd;

struct FockSpace {
    int dim = 64;
    double xi = 1.0;

    void validate(int cap = kDefaultFockCap) const {
        if (dim < 2) throw InvalidArgument("Fock dimension must be at least 2");
        if (dim > cap) throw InvalidArgument("Fock dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(cap));
        DeformationParameter{xi};
    }
};

struct FockOperators {
    FockMatrix a, adag, n, h;
};

/// Kerr energies E_n = w2 xi^2 n(n-1) + w1 xi n.
inline Eigen::VectorXd kerr_energies(const FockSpace& sp, const KerrParams& k) {
    Eigen::VectorXd e(sp.dim);
    for (int n = 0; n < sp.dim; ++n) e(n) = k.w2 * sp.xi * sp.xi * n * (n - 1.0) + k.w1 * sp.xi * n;
    return e;
}

inline FockOperators build_operators(const FockSpace& sp, const KerrParams& k) {
    sp.validate();
    FockOperators ops;
    ops.a = FockMatrix::Zero(sp.dim, sp.dim);
    for (int n = 1; n < sp.dim; ++n) ops.a(n - 1, n) = std::sqrt(sp.xi * n);
    ops.adag = ops.a.adjoint();
    ops.n = ops.adag * ops.a;
    ops.h = kerr_energies(sp, k).cast<cplx>().asDiagonal();
    return ops;
}

/// (a v)_n = sqrt(xi (n+1)) v_{n+1}
inline FockVector apply_a(const FockVector& v, double xi) {
    const Eigen::Index d = v.size();
    FockVector r = FockVector::Zero(d);
    for (Eigen::Index n = 0; n + 1 < d; ++n) r(n) = std::sqrt(xi * double(n + 1)) * v(n + 1);
    return r;
}

/// (a^+ v)_n = sqrt(xi n) v_{n-1}
inline FockVector apply_adag(const FockVector& v, double xi) {
    const Eigen::Index d = v.size();
    FockVector r = FockVector::Zero(d);
    for (Eigen::Index n = 1; n < d; ++n) r(n) = std::sqrt(xi * double(n)) * v(n - 1);
    return r;
}

/// Tail mass sum_{n >= dim-5} |c_n|^2.
inline double truncation_report(const FockVector& v) {
    const Eigen::Index start = std::max<Eigen::Index>(0, v.size() - 5);
    return v.segment(start, v.size() - start).squaredNorm();
}

inline void require_tail(const FockVector& v, const FockSpace& sp, const char* what) {
    const double tail = truncation_report(v);
    if (!(tail < kTailTolerance))
        throw TruncationInsufficient(std::string(what) + ": tail mass " + std::to_string(tail) + " at dim " +
                                     std::to_string(sp.dim));
}

/// c_n = exp(-|alpha|^2 / 2xi) alpha^n / sqrt(xi^n n!)
inline FockVector coherent_vector(cplx alpha, const FockSpace& sp) {
    sp.validate();
    FockVector v(sp.dim);
    v(0) = std::exp(-std::norm(alpha) / (2.0 * sp.xi));
    for (int n = 1; n < sp.dim; ++n) v(n) = v(n - 1) * alpha / std::sqrt(sp.xi * n);
    require_tail(v, sp, "coherent_vector");
    return v;
}

namespace detail {

/// exp(X) v for X = tau (a^+)^2 - tau* a^2 by a scaled Taylor series (X is banded and anti-Hermitian).
inline FockVector squeeze_action(const FockVector& v, cplx tau, double xi) {
    const Eigen::Index d = v.size();
    if (tau == cplx{}) return v;
    std::vector<double> up(std::size_t(d), 0.0);  // (a^+2)_{n,n-2}
    for (Eigen::Index n = 2; n < d; ++n) up[std::size_t(n)] = xi * std::sqrt(double(n) * double(n - 1));
    auto apply_x = [&](const FockVector& u, cplx h) {
        FockVector r = FockVector::Zero(d);
        const cplx cu = h * tau, cd = -h * std::conj(tau);
        for (Eigen::Index n = 2; n < d; ++n) {
            r(n) += cu * up[std::size_t(n)] * u(n - 2);
            r(n - 2) += cd * up[std::size_t(n)] * u(n);
        }
        return r;
    };
    const double norm_x = 2.0 * std::abs(tau) * xi * double(d);
    const int steps = std::max(1, int(std::ceil(norm_x / 2.0)));
    const double h = 1.0 / steps;
    FockVector w = v;
    for (int k = 0; k < steps; ++k) {
        FockVector term = w, acc = w;
        for (int j = 1; j < 80; ++j) {
            term = apply_x(term, h / j);
            acc += term;
            if (term.norm() <= 1e-17 * acc.norm()) break;
        }
        w = std::move(acc);
    }
    return w;
}

}  // namespace detail

/// V(tau)|alpha> with V(tau) = exp[tau (a^+)^2 - tau* a^2] applied to the coherent vector.
inline FockVector squeezed_vector(const SqueezedState& st, const FockSpace& sp) {
    st.validate();
    if (std::abs(st.xi - sp.xi) > 0.0) throw InvalidArgument("state and Fock space disagree on xi");
    sp.validate();
    FockVector c(sp.dim);
    c(0) = std::exp(-std::norm(st.coherent.alpha) / (2.0 * sp.xi));
    for (int n = 1; n < sp.dim; ++n) c(n) = c(n - 1) * st.coherent.alpha / std::sqrt(sp.xi * n);
    const FockVector v = detail::squeeze_action(c, st.squeeze.tau(), sp.xi);
    require_tail(v, sp, "squeezed_vector");
    return v;
}

/// Dense V(tau) by Eigen's scaling-and-squaring Pade exponential; small dims only.
inline FockMatrix squeeze_operator_dense(const SqueezeParams& sq, const FockSpace& sp) {
    sp.validate(1024);
    const FockOperators ops = build_operators(sp, {0.0, 0.0, sp.xi});
    const FockMatrix x = sq.tau() * ops.adag * ops.adag - std::conj(sq.tau()) * ops.a * ops.a;
    FockMatrix v = x.exp();
    if ((v.adjoint() * v - FockMatrix::Identity(sp.dim, sp.dim)).norm() >= 1e-10)
        throw TruncationInsufficient("squeeze operator failed the unitarity check");
    return v;
}

struct FockState {
    FockSpace space;
    FockVector vector;
};

/// Builds a vector, doubling dim from start_dim until the tail criterion holds.
template <class Builder>
FockState grow_until_converged(Builder&& build, double xi, int start_dim, int cap) {
    for (int dim = start_dim;; dim *= 2) {
        const FockSpace sp{std::min(dim, cap), xi};
        try {
            return {sp, build(sp)};
        } catch (const TruncationInsufficient&) {
            if (sp.dim >= cap) throw;
        }
    }
}

inline FockState coherent_vector_auto(cplx alpha, double xi, int start_dim = 32, int cap = kDefaultFockCap) {
    return grow_until_converged([&](const FockSpace& sp) { return coherent_vector(alpha, sp); }, xi, start_dim, cap);
}

inline FockState squeezed_vector_auto(const SqueezedState& st, int start_dim = 64, int cap = kDefaultFockCap) {
    return grow_until_converged([&](const FockSpace& sp) { return squeezed_vector(st, sp); }, st.xi, start_dim, cap);
}

/// U_t v with U_t = exp(-i H t / xi).
inline FockVector evolve(const FockVector& v, double t, const FockSpace& sp, const KerrParams& k) {
    const Eigen::VectorXd e = kerr_energies(sp, k);
    FockVector w(v.size());
    for (Eigen::Index n = 0; n < v.size(); ++n) w(n) = std::exp(-I * (e(n) * t / sp.xi)) * v(n);
    return w;
}

inline FockVector apply_a_power(FockVector v, int m, double xi) {
    for (int i = 0; i < m; ++i) v = apply_a(v, xi);
    return v;
}

/// <u| (a^+(t))^s a(t)^m |v> = <a^s U_t u | a^m U_t v>.
inline cplx heisenberg_matrix_element(const ObservableIndex& idx, double t, const FockVector& u, const FockVector& v,
                                      const FockSpace& sp, const KerrParams& k) {
    idx.validate();
    const FockVector wu = apply_a_power(evolve(u, t, sp, k), idx.s, sp.xi);
    const FockVector wv = apply_a_power(evolve(v, t, sp, k), idx.m, sp.xi);
    return wu.dot(wv);  // conjugates the first argument
}

inline cplx heisenberg_expectation(const ObservableIndex& idx, double t, const FockVector& v, const FockSpace& sp,
                                   const KerrParams& k) {
    return heisenberg_matrix_element(idx, t, v, v, sp, k);
}

}  // namespace kerr
