/*
 * quantizer.hpp - the quantizer Delta(x) in position representation.
 *
 *   [Delta(q, p) psi](q') = exp(2i p (q' - q) / xi) psi(2q - q') / (pi xi)
 *
 * Equivalently <q'|Delta(x)|q''> = exp(i p (q' - q'') / xi)
 * delta(2q - q' - q'') / (pi xi). The delta factor is never materialized;
 * quantizer_kernel returns the smooth prefactor and apply_quantizer the
 * smeared action on a wavefunction.
 */
#pragma once

#include <complex>

#include "kerr/phase_space.hpp"

namespace kerr {

/// Smooth prefactor of <q'|Delta(x)|q''>; the kernel is supported on q' + q'' = 2q.
inline cplx quantizer_kernel(const PhasePoint& x, double q1, double q2, DeformationParameter xi) {
    return std::exp(I * x.p * (q1 - q2) / double(xi)) / (pi * double(xi));
}

/// Reflection point of the kernel: q'' = 2q - q'.
inline double quantizer_partner(const PhasePoint& x, double q1) { return 2.0 * x.q - q1; }

template <class Wavefunction>
cplx apply_quantizer(const PhasePoint& x, Wavefunction&& psi, double q1, DeformationParameter xi) {
    return std::exp(2.0 * I * x.p * (q1 - x.q) / double(xi)) * psi(2.0 * x.q - q1) / (pi * double(xi));
}

}  // namespace kerr
