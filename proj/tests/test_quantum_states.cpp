#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Eigenvalues>

#include "kerr/quantum_states.hpp"
#include "kerr/star_product.hpp"

using namespace kerr;
using Catch::Approx;
using boost::math::quadrature::gauss_kronrod;

namespace {

template <class F>
double integrate_line(F&& f, double a, double b) {
    return gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-14);
}

/// 2D integral over a box by nested adaptive Gauss-Kronrod.
template <class F>
double integrate_box(F&& f, double lo, double hi) {
    return integrate_line([&](double q) { return integrate_line([&](double p) { return f(q, p); }, lo, hi); }, lo, hi);
}

}  // namespace

TEST_CASE("phase reduction", "[states]") {
    CHECK(reduce_phase(pi) == Approx(pi));
    CHECK(reduce_phase(-pi) == Approx(pi));
    CHECK(reduce_phase(3 * pi / 2) == Approx(-pi / 2));
    CHECK(reduce_phase(0.3) == Approx(0.3));
    CHECK(wrap_phase(-0.5) == Approx(2 * pi - 0.5));
    const SqueezedState st{{std::polar(1.0, 0.4)}, {0.3, 0.8 + pi}, 1.0};
    CHECK(st.delta_phi() == Approx(pi));
}

TEST_CASE("squeeze matrix", "[states]") {
    const double xi = 0.7;
    CHECK((squeeze_matrix({0.0, 1.3}, xi) - Mat2::Identity()).norm() < 1e-15);
    for (double mag : {0.1, 0.5, 1.2})
        for (double phi : {0.0, 0.9, pi, 4.4}) {
            const SqueezeParams sq{mag, phi};
            const Mat2 s = squeeze_matrix(sq, xi);
            CHECK(is_symplectic(s));
            CHECK((s - s.transpose()).norm() == 0.0);
            CHECK(s.determinant() == Approx(1.0).epsilon(1e-12));
            CHECK((s - squeeze_matrix_factored(sq, xi)).cwiseAbs().maxCoeff() < 1e-12 * s.norm());
            CHECK((s * s - squeeze_matrix({2 * mag, phi}, xi)).cwiseAbs().maxCoeff() < 1e-12 * (s * s).norm());
            CHECK((s * squeeze_matrix({mag, phi + pi}, xi) - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12 * s.norm());

            Eigen::SelfAdjointEigenSolver<Mat2> es(s);
            CHECK(es.eigenvalues()(0) == Approx(sq.s(xi)).epsilon(1e-12));
            CHECK(es.eigenvalues()(1) == Approx(1.0 / sq.s(xi)).epsilon(1e-12));
        }
    const auto sq = SqueezeParams::from_s(0.1, 0.0, 2.0);
    CHECK(sq.s(2.0) == Approx(0.1));
    CHECK_THROWS_AS(SqueezeParams::from_s(1.5, 0.0, 1.0), InvalidState);
}

TEST_CASE("coherent wavefunction", "[states]") {
    const double xi = 0.6;
    const cplx alpha(0.8, -0.5);
    const double norm = integrate_line([&](double q) { return std::norm(coherent_wavefunction(alpha, xi, q)); }, -12, 12);
    CHECK(norm == Approx(1.0).epsilon(1e-10));
    const double mean_q =
        integrate_line([&](double q) { return q * std::norm(coherent_wavefunction(alpha, xi, q)); }, -12, 12);
    CHECK(mean_q == Approx(std::sqrt(2.0) * alpha.real()).epsilon(1e-10));
    CHECK(std::abs(coherent_wavefunction(0.0, xi, 0.4) - std::pow(pi * xi, -0.25) * std::exp(-0.08 / xi)) < 1e-15);

    // <alpha|beta> from the wavefunctions
    const cplx beta(-0.3, 0.9);
    auto overlap = [&](bool imag) {
        return integrate_line(
            [&](double q) {
                const cplx v = std::conj(coherent_wavefunction(alpha, xi, q)) * coherent_wavefunction(beta, xi, q);
                return imag ? v.imag() : v.real();
            },
            -12, 12);
    };
    const cplx numeric(overlap(false), overlap(true));
    CHECK(std::abs(numeric - coherent_overlap(alpha, beta, xi)) < 1e-10);
}

TEST_CASE("coherent projector symbol", "[states]") {
    const double xi = 0.5;
    const cplx alpha(0.3, 1.1);
    const PhasePoint m = CoherentParams{alpha}.mean();
    CHECK(coherent_projector_symbol(alpha, xi, m) == Approx(2.0));
    const double trace = integrate_box([&](double q, double p) { return coherent_projector_symbol(alpha, xi, {q, p}); },
                                       -10, 10) /
                         (2 * pi * xi);
    CHECK(trace == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("squeezed projector symbol", "[states][property]") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5), um(0.0, 0.8), uphi(0.0, 2 * pi);
    for (int trial = 0; trial < 50; ++trial) {
        const SqueezedState st{{cplx(u(rng), u(rng))}, {um(rng), uphi(rng)}, 0.4 + 0.3 * std::abs(u(rng))};
        const PhasePoint x{u(rng), u(rng)};
        const double direct = squeezed_projector_symbol(st, x);
        const double covariant = coherent_projector_symbol(st.coherent.alpha, st.xi,
                                                           apply(squeeze_matrix(st.squeeze, st.xi), x));
        CHECK(direct == Approx(covariant).epsilon(1e-12).margin(1e-300));
        CHECK(squeezed_projector_gaussian(st)(x).real() == Approx(direct).epsilon(1e-12).margin(1e-300));
    }
    const SqueezedState plain{{cplx(0.4, 0.2)}, {0.0, 1.0}, 0.8};
    const PhasePoint x{0.3, -0.6};
    CHECK(squeezed_projector_symbol(plain, x) == Approx(coherent_projector_symbol(plain.coherent.alpha, 0.8, x)));

    const SqueezedState st{{cplx(0.4, 0.2)}, {0.5, 0.7}, 0.8};
    const auto rho = squeezed_projector_gaussian(st);
    CHECK(phase_space_inner_product(rho, GaussPolySymbol()).real() == Approx(2 * pi * st.xi).epsilon(1e-12));
    CHECK(phase_space_inner_product(rho, rho).real() == Approx(2 * pi * st.xi).epsilon(1e-12));
}

TEST_CASE("variances and the Schrodinger-Robertson bound", "[states][property]") {
    const SqueezedState plain{{cplx(0.4, 0.2)}, {0.0, 1.0}, 0.8};
    const auto v0 = variances(plain);
    CHECK(v0.var_q == Approx(0.4));
    CHECK(v0.var_p == Approx(0.4));
    CHECK(v0.cov_f == Approx(0.0).margin(1e-16));

    const SqueezedState qs{{1.0}, {0.4, pi}, 1.0};
    const auto vq = variances(qs);
    CHECK(vq.var_q == Approx(0.5 * qs.s() * qs.s()));
    CHECK(vq.var_p == Approx(0.5 / (qs.s() * qs.s())));

    for (double mag : {0.05, 0.3, 0.9})
        for (double phi = 0.0; phi < 2 * pi; phi += 0.37) {
            const SqueezedState st{{cplx(0.2, 0.1)}, {mag, phi}, 0.9};
            const auto v = variances(st);
            const double lhs = v.var_q * v.var_p;
            const double rhs = st.xi * st.xi / 4 + v.cov_f * v.cov_f;
            CHECK(std::abs(lhs - rhs) <= 1e-12 * lhs);
        }
}

TEST_CASE("variances match phase-space moments of the squeezed symbol", "[states]") {
    const SqueezedState st{{cplx(0.3, -0.4)}, {0.35, 1.1}, 0.7};
    const PhasePoint mean = apply(squeeze_matrix({st.squeeze.magnitude, st.squeeze.phase + pi}, st.xi),
                                  st.coherent.mean());
    auto moment = [&](auto&& g) {
        return integrate_box([&](double q, double p) { return g(q - mean.q, p - mean.p) * squeezed_projector_symbol(st, {q, p}); },
                             -9, 9) /
               (2 * pi * st.xi);
    };
    const auto v = variances(st);
    CHECK(moment([](double dq, double) { return dq * dq; }) == Approx(v.var_q).epsilon(1e-9));
    CHECK(moment([](double, double dp) { return dp * dp; }) == Approx(v.var_p).epsilon(1e-9));
    // The Weyl symbol of {dq, dp}_sym / 2 is dq dp.
    CHECK(moment([](double dq, double dp) { return dq * dp; }) == Approx(v.cov_f).epsilon(1e-9));
}

TEST_CASE("mean photon number", "[states]") {
    const SqueezedState plain{{cplx(0.4, 0.2)}, {0.0, 1.0}, 0.8};
    CHECK(mean_photon_number(plain) == Approx(std::norm(plain.coherent.alpha)));
    const SqueezedState vac{{0.0}, {0.3, 1.0}, 1.0};
    CHECK(mean_photon_number(vac) == Approx(std::pow(std::sinh(0.6), 2)));

    // Against the phase-space integral of the number symbol (x^2 - xi) / 2.
    for (double xi : {1.0, 0.4}) {
        const SqueezedState st{{cplx(0.5, 0.3)}, {0.3, 0.9}, xi};
        const double n = integrate_box([&](double q, double p) {
                             return 0.5 * (q * q + p * p - xi) * squeezed_projector_symbol(st, {q, p});
                         }, -12, 12) / (2 * pi * xi);
        CHECK(mean_photon_number(st) == Approx(n).epsilon(1e-9));
    }
}

TEST_CASE("phase shift convention", "[states]") {
    const SqueezedState st{{cplx(0.7, 0.4)}, {0.25, 1.3}, 0.6};
    const double delta = 0.55;
    const auto sh = st.phase_shifted(delta);
    CHECK(std::abs(sh.coherent.alpha - st.coherent.alpha * std::exp(-I * delta)) < 1e-16);
    CHECK(std::abs(sh.squeeze.tau() - st.squeeze.tau() * std::exp(-2.0 * I * delta)) < 1e-15);
    CHECK(sh.delta_phi() == Approx(st.delta_phi()));
    CHECK(mean_photon_number(sh) == Approx(mean_photon_number(st)));
    // The shifted symbol is the original one seen through a rotation of z by e^{i delta}.
    for (const PhasePoint x : {PhasePoint{0.3, 0.2}, PhasePoint{-1.0, 0.7}})
        CHECK(squeezed_projector_symbol(sh, x) ==
              Approx(squeezed_projector_symbol(st, apply(rotation(2 * delta), x))).epsilon(1e-12));
}

TEST_CASE("invalid states", "[states][errors]") {
    CHECK_THROWS_AS((SqueezedState{{1.0}, {-0.1, 0.0}, 1.0}.validate()), InvalidState);
    CHECK_THROWS_AS((SqueezedState{{1.0}, {0.1, 0.0}, 0.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((SqueezedState{{cplx(NAN, 0)}, {0.1, 0.0}, 1.0}.validate()), InvalidState);
}
