#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kerr/expectation.hpp"
#include "kerr/fock_oracle.hpp"
#include "kerr/quantizer.hpp"

using namespace kerr;
using Catch::Approx;

namespace {

SqueezedState number_squeezed(double s, double dphi = pi, cplx alpha = 1.0, double xi = 1.0) {
    return {{alpha}, SqueezeParams::from_s(s, dphi + 2.0 * std::arg(alpha), xi), xi};
}

cplx nosqueeze(double t, cplx alpha, const KerrParams& k) {
    const double th = k.xi * k.w2 * t;
    return alpha * std::exp(-I * k.w1 * t - 2.0 * I * std::norm(alpha) / k.xi * std::sin(th) * std::exp(-I * th));
}

/// <alpha|Delta(x)|beta> by integrating the position kernel against the two wavefunctions.
cplx quantizer_element_by_kernel(cplx alpha, cplx beta, const PhasePoint& x, double xi) {
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [&](double q1) {
        return std::conj(coherent_wavefunction(alpha, xi, q1)) * quantizer_kernel(x, q1, quantizer_partner(x, q1), DeformationParameter{xi}) *
               coherent_wavefunction(beta, xi, quantizer_partner(x, q1));
    };
    const double re = gauss_kronrod<double, 61>::integrate([&](double q) { return integrand(q).real(); }, -15.0, 15.0, 12, 1e-14);
    const double im = gauss_kronrod<double, 61>::integrate([&](double q) { return integrand(q).imag(); }, -15.0, 15.0, 12, 1e-14);
    return {re, im};
}

}  // namespace

TEST_CASE("coherent states reduce to the unsqueezed result", "[expectation]") {
    const KerrParams k{0.7, 0.4, 0.8};
    for (cplx alpha : {cplx(1.0), cplx(0.3, -0.9)}) {
        const SqueezedState st{{alpha}, {0.0, 0.0}, k.xi};
        for (int i = 0; i <= 40; ++i) {
            const double t = i * 0.25;
            CHECK(std::abs(expectation_a_closed(t, st, k).value - nosqueeze(t, alpha, k)) < 1e-12);
        }
    }
}

TEST_CASE("t = 0 gives the Bogoliubov mean", "[expectation][property]") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.2, 1.2), um(0.0, 0.7), uphi(0.0, 2 * pi);
    for (int trial = 0; trial < 40; ++trial) {
        const double xi = 0.3 + std::abs(u(rng));
        const SqueezedState st{{cplx(u(rng), u(rng))}, {um(rng), uphi(rng)}, xi};
        const KerrParams k{u(rng), u(rng), xi};
        const auto r = expectation_a_closed(0.0, st, k);
        CHECK(std::abs(r.value - initial_mean_a(st)) < 1e-12 * (1 + std::abs(r.value)));
        CHECK(r.branch_winding == 0);
    }
}

TEST_CASE("singular time value", "[expectation]") {
    const KerrParams k{0.0, 1.0, 1.0};
    const SqueezedState st = number_squeezed(0.1);
    const auto r = expectation_a_closed(pi / 2, st, k);
    CHECK(std::abs(r.value) == Approx(10.0 * std::exp(-2.0)).epsilon(1e-10));
    CHECK(r.mean_q == Approx(std::sqrt(2.0) * r.value.real()));
    CHECK(r.mean_p == Approx(std::sqrt(2.0) * r.value.imag()));
    CHECK(r.branch_winding == 1);
    CHECK_FALSE(gaussian_factors(pi / 2, 0.1, k).T.has_value());
    CHECK(gaussian_factors(pi / 4, 0.1, k).T.value() == Approx(1.0));
}

TEST_CASE("G^{3/2} branch tracking", "[expectation][property]") {
    const KerrParams k{0.2, 1.0, 1.0};
    for (double s : {1.0, 0.5, 0.1, 0.02}) {
        const auto f0 = gaussian_factors(0.0, s, k);
        CHECK(f0.G == cplx(1.0));
        CHECK(f0.sqrtG3 == cplx(1.0));
        CHECK(f0.T.value() == 0.0);
        for (int i = 0; i <= 200; ++i) {
            const double t = -3.0 + i * 0.05;
            const auto f = gaussian_factors(t, s, k);
            CHECK(std::abs(f.sqrtG3 * f.sqrtG3 - f.G * f.G * f.G) < 1e-12);
            // arg G stays inside (-pi/2, pi/2), so the continued branch is the principal one.
            CHECK(std::abs(std::arg(f.G)) < pi / 2);
            CHECK(std::abs(f.sqrtG3 - std::pow(f.G, 1.5)) < 1e-12);
        }
    }

    // The printed tan form and the trigonometric form agree off the singular times.
    const KerrParams kk{1.0, 0.3, 1.0};
    const SqueezedState st{{cplx(0.8, 0.5)}, {0.6, 2.0}, 1.0};
    for (int i = 1; i < 60; ++i) {
        const double t = i * 0.37;
        if (std::abs(std::cos(kk.xi * kk.w2 * t)) < 1e-3) continue;
        const cplx a = expectation_a_closed(t, st, kk).value;
        CHECK(std::abs(detail::expectation_a_tan_form(t, st, kk) - a) < 1e-10 * (1 + std::abs(a)));
    }

    // One long sweep and independent per-point calls agree; the winding counts poles.
    std::vector<double> times;
    for (int i = 0; i <= 500; ++i) times.push_back(i * 5 * pi / 500);
    const auto sweep = expectation_a_sweep(times, st, kk);
    const double w2 = kk.w2;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto single = expectation_a_closed(times[i], st, kk);
        CHECK(std::abs(sweep[i].value - single.value) < 1e-12 * (1 + std::abs(single.value)));
        const int poles = int(std::floor(w2 * times[i] / pi + 0.5));
        CHECK(sweep[i].branch_winding == poles);
    }
    CHECK(expectation_a_closed(-pi / (2 * w2) - 0.1, st, kk).branch_winding == -1);
    CHECK_THROWS_AS(expectation_a_sweep({0.0, 1.0, 0.5}, st, kk), InvalidArgument);
}

TEST_CASE("closed form is smooth through the singular time", "[expectation][property]") {
    const KerrParams k{0.0, 1.0, 1.0};
    for (double s : {0.5, 0.1}) {
        const SqueezedState st = number_squeezed(s);
        const double scale = std::abs(expectation_a_closed(pi / 2, st, k).value);
        double max_jump = 0.0;
        cplx prev = expectation_a_closed(pi / 2 - 1e-4, st, k).value;
        for (int i = 1; i <= 200; ++i) {
            const cplx v = expectation_a_closed(pi / 2 - 1e-4 + i * 1e-6, st, k).value;
            max_jump = std::max(max_jump, std::abs(v - prev));
            prev = v;
        }
        CHECK(max_jump <= 1e-4 * scale);
    }
}

TEST_CASE("number squeezing peak and phase squeezing flatness", "[expectation][property]") {
    const KerrParams k{0.0, 1.0, 1.0};
    auto peak = [&](const SqueezedState& st) {
        double best = 0.0;
        for (int i = 0; i <= 600; ++i) {
            const double t = pi / 2 - 0.3 + i * 0.001;
            best = std::max(best, std::abs(expectation_a_closed(t, st, k).value));
        }
        return best;
    };
    double last = 0.0;
    for (double s : {0.5, 0.2, 0.1}) {
        const double p = peak(number_squeezed(s, pi));
        CHECK(p > last);
        last = p;
    }
    for (double s : {0.5, 0.2, 0.1}) {
        const SqueezedState st = number_squeezed(s, 0.0);
        CHECK(peak(st) <= 0.1 * std::abs(expectation_a_closed(0.0, st, k).value));
    }
}

TEST_CASE("vanishing squeeze factor", "[expectation]") {
    const KerrParams k{0.3, 1.0, 1.0};
    for (double dphi : {0.0, pi, 1.0})
        for (double t : {0.4, 1.0, 2.5}) CHECK(std::abs(expectation_a_closed(t, number_squeezed(1e-3, dphi), k).value) < 1e-3);
    const SqueezedState huge{{1.0}, {1e6, 0.0}, 1.0};
    CHECK_THROWS_AS(expectation_a_closed(1.0, huge, k), InvalidState);
}

TEST_CASE("dependence on |alpha|, s and delta phi only", "[expectation][property]") {
    const KerrParams k{0.6, 0.8, 0.7};
    const SqueezedState st{{cplx(0.9, 0.4)}, {0.4, 1.7}, 0.7};
    for (double delta : {0.3, 1.9, -2.4}) {
        const SqueezedState sh = st.phase_shifted(delta);
        for (double t : {0.0, 0.9, 2.2, 5.0}) {
            const cplx r0 = expectation_a_closed(t, st, k).value / st.coherent.alpha;
            const cplx r1 = expectation_a_closed(t, sh, k).value / sh.coherent.alpha;
            CHECK(std::abs(r0 - r1) < 1e-12 * (1 + std::abs(r0)));
        }
    }
}

TEST_CASE("closed form against the Fock oracle and quadrature", "[expectation][oracle]") {
    const KerrParams k{1.0, 0.2, 1.0};
    const SqueezedState st = number_squeezed(0.5);
    const auto fs = squeezed_vector_auto(st);
    for (double t : {0.0, 1.0, 4.0, 9.0}) {
        const cplx c = expectation_a_closed(t, st, k).value;
        CHECK(std::abs(heisenberg_expectation({0, 1}, t, fs.vector, fs.space, k) - c) < 1e-8 * (1 + std::abs(c)));
    }
    const cplx c1 = expectation_a_closed(1.0, st, k).value;
    CHECK(std::abs(expectation_a_quadrature(1.0, st, k).value - c1) < 1e-6);
    CHECK(std::abs(expectation_a_quadrature(0.0, st, k).value - initial_mean_a(st)) < 1e-8);

    const SqueezedState tilted{{cplx(0.4, -0.7)}, {0.3, 2.2}, 0.6};
    const KerrParams kt{0.5, 0.7, 0.6};
    const auto ft = squeezed_vector_auto(tilted);
    for (double t : {0.5, 2.0, 3.3}) {
        const cplx c = expectation_a_closed(t, tilted, kt).value;
        CHECK(std::abs(heisenberg_expectation({0, 1}, t, ft.vector, ft.space, kt) - c) < 1e-8 * (1 + std::abs(c)));
        CHECK(std::abs(expectation_a_quadrature(t, tilted, kt).value - c) < 1e-6 * (1 + std::abs(c)));
    }

    const SqueezedState coh{{cplx(0.7, 0.2)}, {0.0, 0.0}, 1.0};
    const KerrParams harmonic{1.3, 0.0, 1.0};
    CHECK(std::abs(expectation_a_quadrature(0.8, coh, harmonic).value - cplx(0.7, 0.2) * std::exp(-I * 1.04)) < 1e-8);
}

TEST_CASE("quadrature error paths", "[expectation][errors]") {
    const KerrParams k{0.0, 1.0, 1.0};
    const SqueezedState st = number_squeezed(0.5);
    CHECK_THROWS_AS(expectation_a_quadrature(pi / 2, st, k), SingularWindow);
    try {
        expectation_a_quadrature(1.0, st, k, 1e-30);
        FAIL("expected ToleranceNotMet");
    } catch (const ToleranceNotMet& e) {
        CHECK(e.achieved() > 1e-30);
        CHECK(e.achieved() < 1e-6);
    }
    CHECK_THROWS_AS(expectation_a_closed(1.0, SqueezedState{{1.0}, {0.1, 0.0}, 0.5}, k), InvalidArgument);
}

TEST_CASE("semiclassical expansion", "[expectation][semiclassical]") {
    const KerrParams k0{0.4, 0.3, 1.0};
    const SqueezedState coh{{cplx(0.6, 0.2)}, {0.0, 0.0}, 1.0};
    CHECK(std::abs(expectation_a_semiclassical(0.0, coh, k0).value - cplx(0.6, 0.2)) < 1e-15);

    // Without squeezing and as xi -> 0 the expansion collapses onto the classical flow.
    const KerrParams tiny{0.4, 0.3, 1e-9};
    const SqueezedState ct{{cplx(0.6, 0.2)}, {0.0, 0.0}, 1e-9};
    CHECK(std::abs(expectation_a_semiclassical(0.7, ct, tiny).value -
                   classical_flow(0.7, ct.coherent.mean(), tiny).a_cl()) < 1e-8);

    CHECK_FALSE(expectation_a_semiclassical(0.05, SqueezedState{{1.0}, {0.05, 0.0}, 1.0}, KerrParams{0, 1, 1}).advisory);
    CHECK(expectation_a_semiclassical(0.5, SqueezedState{{1.0}, {0.05, 0.0}, 1.0}, KerrParams{0, 1, 1}).advisory);
    CHECK(expectation_a_semiclassical(0.05, number_squeezed(0.5), KerrParams{0, 1, 1}).advisory);

    // The residual against the exact value is O(xi^2) at fixed tau.
    for (double dphi : {0.0, pi, 1.2}) {
        std::vector<double> res;
        for (double xi : {2e-2, 1e-2, 5e-3}) {
            const KerrParams k{0.5, 1.0, xi};
            const SqueezedState st{{cplx(0.8, 0.6)}, {1.5, dphi + 2.0 * std::arg(cplx(0.8, 0.6))}, xi};
            double worst = 0.0;
            for (double t : {0.1, 0.3, 0.6, 1.0})
                worst = std::max(worst, std::abs(expectation_a_semiclassical(t, st, k).value -
                                                 expectation_a_closed(t, st, k).value));
            res.push_back(worst);
        }
        CHECK(res[0] / res[1] == Approx(4.0).margin(0.5));
        CHECK(res[1] / res[2] == Approx(4.0).margin(0.5));
    }
}

TEST_CASE("coherent matrix elements", "[expectation][matrix]") {
    const KerrParams k{1.0, 0.1, 1.0};
    const cplx alpha = 1.0, beta(0.5, 0.3);
    CHECK(std::abs(matrix_element({0, 0}, 2.3, alpha, beta, k) - coherent_overlap(alpha, beta, 1.0)) < 1e-15);
    CHECK(std::abs(matrix_element({0, 1}, 0.0, cplx(0.4, 0.9), cplx(0.4, 0.9), k) - cplx(0.4, 0.9)) < 1e-15);

    const auto fa = coherent_vector_auto(alpha, 1.0, 64);
    const FockVector vb = coherent_vector(beta, fa.space);
    for (int s = 0; s <= 3; ++s)
        for (int m = 0; m <= 3; ++m)
            for (double t : {0.0, 0.7, 3.0, pi / (2 * 0.1 * std::max(1, m - s)), 20.0}) {
                const ObservableIndex idx{s, m};
                const cplx closed = matrix_element(idx, t, alpha, beta, k);
                const cplx fock = heisenberg_matrix_element(idx, t, fa.vector, vb, fa.space, k);
                CHECK(std::abs(closed - fock) <= 1e-8 * std::abs(fock));
                if (!moyal_solution(idx, t, {0.0, 0.0}, k).is_singular())
                    CHECK(std::abs(matrix_element_phase_space(idx, t, alpha, beta, k) - closed) <= 1e-10 * std::abs(closed));
            }
    CHECK_THROWS_AS(matrix_element({0, 31}, 0.0, alpha, beta, k), IndexCapExceeded);
}

TEST_CASE("coherent quantizer element", "[expectation][matrix]") {
    CHECK(coherent_quantizer_element(0.0, 0.0, {0.0, 0.0}, 0.8) == cplx(1.0 / (pi * 0.8)));
    const double xi = 0.8;
    const cplx alpha(0.6, -0.2), beta(-0.3, 0.5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const PhasePoint x{-1.0 + 0.5 * i, -1.0 + 0.5 * j};
            const cplx kernel = quantizer_element_by_kernel(alpha, beta, x, xi);
            CHECK(std::abs(coherent_quantizer_element(alpha, beta, x, xi) - kernel) < 1e-8);
            CHECK(std::abs(coherent_quantizer_symbol(alpha, beta, xi)(x) - kernel) < 1e-8);
        }
    // Resolution of identity: the integral over phase space is <alpha|beta>.
    CHECK(std::abs(phase_space_inner_product(coherent_quantizer_symbol(alpha, alpha, xi), GaussPolySymbol()) - 1.0) < 1e-14);
    CHECK(std::abs(phase_space_inner_product(coherent_quantizer_symbol(alpha, beta, xi), GaussPolySymbol()) -
                   coherent_overlap(alpha, beta, xi)) < 1e-14);
}
