#include <catch_amalgamated.hpp>

#include <cmath>

#include "kerr/fock_oracle.hpp"

using namespace kerr;
using Catch::Approx;

namespace {

double second_moment(const FockVector& v, double xi, int which, cplx mean_a) {
    // q = (a + a^+)/sqrt2, p = (a - a^+)/(i sqrt2); central moments from <a^2>, <a^+ a>.
    const FockVector av = apply_a(v, xi);
    const cplx a2 = v.dot(apply_a(av, xi));
    const double n = av.squaredNorm();
    const cplx da2 = a2 - mean_a * mean_a;
    const double dn = n - std::norm(mean_a);
    if (which == 0) return 0.5 * (2.0 * dn + xi + 2.0 * da2.real());  // var q
    if (which == 1) return 0.5 * (2.0 * dn + xi - 2.0 * da2.real());  // var p
    return da2.imag();                                                 // symmetrized covariance
}

}  // namespace

TEST_CASE("ladder operators and hamiltonian", "[fock]") {
    const FockSpace sp{12, 0.7};
    const KerrParams k{0.4, 1.3, 0.7};
    const auto ops = build_operators(sp, k);
    const FockMatrix comm = ops.a * ops.adag - ops.adag * ops.a;
    // sqrt(xi n)^2 differs from xi n by rounding only
    CHECK((comm.topLeftCorner(sp.dim - 1, sp.dim - 1) - sp.xi * FockMatrix::Identity(sp.dim - 1, sp.dim - 1))
              .cwiseAbs()
              .maxCoeff() <= 1e-14 * sp.xi);
    CHECK(std::abs(comm(sp.dim - 1, sp.dim - 1) + sp.xi * (sp.dim - 1)) < 1e-13);
    CHECK(std::abs(ops.a(2, 3) - std::sqrt(0.7 * 3)) < 1e-15);

    CHECK(ops.h(0, 0) == cplx(0.0));
    CHECK(ops.h(2, 2).real() == Approx(2 * k.w2 * 0.49 + 2 * k.w1 * 0.7));
    CHECK((ops.n - FockMatrix(ops.n.diagonal().asDiagonal())).norm() < 1e-15);
    CHECK(ops.n(5, 5).real() == Approx(0.7 * 5));

    const FockMatrix na = ops.n * ops.a - ops.a * ops.n;
    CHECK((na + sp.xi * ops.a).topLeftCorner(sp.dim - 1, sp.dim - 1).norm() < 1e-14);

    // banded helpers agree with the matrices
    const FockVector v = FockVector::LinSpaced(sp.dim, 0.1, 1.0) * cplx(0.3, 0.8);
    CHECK((apply_a(v, sp.xi) - ops.a * v).norm() < 1e-15);
    CHECK((apply_adag(v, sp.xi) - ops.adag * v).norm() < 1e-15);
}

TEST_CASE("coherent vectors", "[fock]") {
    const FockSpace sp{60, 1.0};
    const auto vac = coherent_vector(0.0, sp);
    CHECK(vac(0) == cplx(1.0));
    CHECK(vac.tail(sp.dim - 1).norm() == 0.0);
    CHECK(truncation_report(vac) == 0.0);

    const cplx alpha(0.8, 0.6);
    const auto v = coherent_vector(alpha, sp);
    CHECK(v.norm() == Approx(1.0).epsilon(1e-12));
    CHECK(truncation_report(coherent_vector(1.0, sp)) < 1e-12);
    CHECK(apply_a(v, sp.xi).squaredNorm() == Approx(std::norm(alpha)).epsilon(1e-10));
    CHECK((apply_a(v, sp.xi) - alpha * v).head(sp.dim - 5).norm() < 1e-10);

    const cplx beta(-0.4, 0.5);
    const auto w = coherent_vector(beta, sp);
    CHECK(std::abs(v.dot(w) - coherent_overlap(alpha, beta, sp.xi)) < 1e-10);

    CHECK_THROWS_AS(coherent_vector(4.0, FockSpace{20, 1.0}), TruncationInsufficient);
    const auto grown = coherent_vector_auto(4.0, 1.0);
    CHECK(grown.space.dim >= 40);
    CHECK(truncation_report(grown.vector) < 1e-12);
}

TEST_CASE("squeeze action agrees with the dense exponential", "[fock]") {
    const FockSpace sp{96, 0.8};
    const SqueezeParams sq{0.3, 1.1};
    const FockMatrix v = squeeze_operator_dense(sq, sp);
    CHECK((v.adjoint() * v - FockMatrix::Identity(sp.dim, sp.dim)).norm() < 1e-10);
    const auto c = coherent_vector(cplx(0.5, -0.3), sp);
    const FockVector dense = v * c;
    const FockVector banded = detail::squeeze_action(c, sq.tau(), sp.xi);
    CHECK((dense - banded).norm() < 1e-12);

    const SqueezedState plain{{cplx(0.5, -0.3)}, {0.0, 1.1}, sp.xi};
    CHECK((squeezed_vector(plain, sp) - c).norm() == 0.0);
}

TEST_CASE("squeezed vector moments", "[fock]") {
    const SqueezedState st{{1.0}, SqueezeParams::from_s(0.5, pi, 1.0), 1.0};
    const auto fs = squeezed_vector_auto(st);
    const FockVector& v = fs.vector;
    CHECK(v.norm() == Approx(1.0).epsilon(1e-12));
    const cplx mean_a = v.dot(apply_a(v, 1.0));
    CHECK(std::abs(mean_a - initial_mean_a(st)) < 1e-10);
    CHECK(apply_a(v, 1.0).squaredNorm() == Approx(mean_photon_number(st)).epsilon(1e-8));

    const auto var = variances(st);
    const double vq = second_moment(v, 1.0, 0, mean_a), vp = second_moment(v, 1.0, 1, mean_a);
    const double cov = second_moment(v, 1.0, 2, mean_a);
    CHECK(vq == Approx(var.var_q).epsilon(1e-8));
    CHECK(vp == Approx(var.var_p).epsilon(1e-8));
    CHECK(std::abs(vq * vp - cov * cov - 0.25) < 1e-8);

    // Tilted squeeze at xi != 1 exercises the covariance and the xi sinh^2 photon term.
    const SqueezedState tilted{{cplx(0.4, 0.7)}, {0.6, 0.9}, 0.6};
    const auto ft = squeezed_vector_auto(tilted);
    const cplx ma = ft.vector.dot(apply_a(ft.vector, 0.6));
    const auto vt = variances(tilted);
    CHECK(second_moment(ft.vector, 0.6, 2, ma) == Approx(vt.cov_f).epsilon(1e-8));
    CHECK(apply_a(ft.vector, 0.6).squaredNorm() == Approx(mean_photon_number(tilted)).epsilon(1e-8));
    const double vqt = second_moment(ft.vector, 0.6, 0, ma), vpt = second_moment(ft.vector, 0.6, 1, ma);
    CHECK(std::abs(vqt * vpt - std::pow(second_moment(ft.vector, 0.6, 2, ma), 2) - 0.09) < 1e-8);
}

TEST_CASE("truncation of strongly squeezed states", "[fock]") {
    const SqueezedState st{{1.0}, SqueezeParams::from_s(0.1, pi, 1.0), 1.0};
    // dim = 400 does not hold s = 0.1: the photon distribution reaches well past n = 1000.
    CHECK_THROWS_AS(squeezed_vector(st, FockSpace{400, 1.0}), TruncationInsufficient);
    const auto fs = squeezed_vector_auto(st);
    CHECK(truncation_report(fs.vector) < 1e-12);
    CHECK(fs.space.dim <= kDefaultFockCap);
    CHECK(fs.vector.norm() == Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(squeezed_vector_auto(st, 64, 512), TruncationInsufficient);
}

TEST_CASE("heisenberg expectations", "[fock]") {
    const KerrParams k{0.9, 0.3, 1.0};
    const auto fs = coherent_vector_auto(1.0, 1.0);
    const KerrParams harmonic{0.9, 0.0, 1.0};
    for (double t : {0.0, 0.7, 3.1}) {
        CHECK(std::abs(heisenberg_expectation({0, 1}, t, fs.vector, fs.space, harmonic) - std::exp(-I * 0.9 * t)) < 1e-12);
        CHECK(std::abs(heisenberg_expectation({1, 1}, t, fs.vector, fs.space, k) -
                       heisenberg_expectation({1, 1}, 0.0, fs.vector, fs.space, k)) < 1e-13);
    }
    // Exact eigen-evolution: evolving forward then back restores the state.
    const FockVector back = evolve(evolve(fs.vector, 2.3, fs.space, k), -2.3, fs.space, k);
    CHECK(std::abs(heisenberg_expectation({0, 1}, 0.0, back, fs.space, k) -
                   heisenberg_expectation({0, 1}, 0.0, fs.vector, fs.space, k)) < 1e-12);

    // A number-diagonal mixture has <a(t)> = 0 at every time, including the Moyal pole.
    cplx mixed{};
    for (int n = 0; n < 6; ++n) {
        FockVector basis = FockVector::Zero(fs.space.dim);
        basis(n) = 1.0;
        mixed += heisenberg_expectation({0, 1}, pi / (2 * k.xi * k.w2), basis, fs.space, k) / 6.0;
    }
    CHECK(std::abs(mixed) == 0.0);
}

TEST_CASE("fock error paths", "[fock][errors]") {
    CHECK_THROWS_AS((FockSpace{1, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((FockSpace{8192, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((FockSpace{16, -1.0}.validate()), InvalidArgument);
    const SqueezedState st{{0.5}, {0.1, 0.0}, 0.5};
    CHECK_THROWS_AS(squeezed_vector(st, FockSpace{64, 1.0}), InvalidArgument);
}
