/*
 * finite_difference.hpp - central difference stencils used by the residual checks.
 */
#pragma once

namespace kerr::fd {

/// f'(x), second order.
template <class F>
auto central1(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// f'(x), fourth order.
template <class F>
auto central1_o4(F&& f, double x, double h) {
    return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

/// f''(x), fourth order.
template <class F>
auto central2_o4(F&& f, double x, double h) {
    return (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h);
}

}  // namespace kerr::fd
