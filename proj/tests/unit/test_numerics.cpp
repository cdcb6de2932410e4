#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <random>

#include "hitchin/numerics.hpp"

using namespace hitchin;

namespace {

// Independent K(k) through the arithmetic-geometric mean.
double agm_k(double k) {
    double a = 1, b = std::sqrt(1 - k * k);
    for (int i = 0; i < 60 && std::abs(a - b) > 1e-17 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return kPi / (2 * a);
}

// K0(x) = int_0^inf exp(-x cosh t) dt.
double k0_quadrature(double x) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate([x](double t) { return std::exp(-x * std::cosh(t)); });
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("complete elliptic integral agrees with the AGM") {
    for (double k : {0.01, 0.3, 0.5, 0.8, 0.99, 0.999999})
        CHECK(std::abs(elliptic_k(k) - agm_k(k)) <= 1e-13 * agm_k(k));
    CHECK_THROWS_AS(elliptic_k(0.0), DomainError);
    CHECK_THROWS_AS(elliptic_k(1.0), DomainError);
    CHECK_THROWS_AS(elliptic_k(-0.1), DomainError);
}

TEST_CASE("incomplete integral reaches the complete one") {
    CHECK(elliptic_f(1.0, 0.5) == doctest::Approx(elliptic_k(0.5)).epsilon(1e-15));
    CHECK(elliptic_f(0.0, 0.5) == 0.0);
    CHECK_THROWS_AS(elliptic_f(1.5, 0.5), DomainError);
}

TEST_CASE("Bessel K0 agrees with its integral representation") {
    for (double x : {1e-6, 0.1, 1.0, 5.0, 30.0, 80.0})
        CHECK(std::abs(bessel_k0(x) - k0_quadrature(x)) <= 1e-12 * k0_quadrature(x));
    CHECK_THROWS_AS(bessel_k0(0.0), DomainError);
}

TEST_CASE("Bessel K1 is minus the derivative of K0") {
    for (double x : {0.05, 1.0, 10.0}) {
        const double h = 1e-5 * x;
        const double fd = -(bessel_k0(x + h) - bessel_k0(x - h)) / (2 * h);
        CHECK(bessel_k1(x) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("closed contour integrals") {
    const auto circle = ParamPath::circle(0.0, 1.0, 64);
    const cplx r = integrate_contour([](cplx z) { return 1.0 / z; }, circle);
    CHECK(rel(r, cplx(0, 2 * kPi)) < 1e-10);
    const cplx zero = integrate_contour([](cplx z) { return z * z; }, circle);
    CHECK(std::abs(zero) < 1e-10);
}

TEST_CASE("inverse square root singularity at a flagged endpoint") {
    const auto seg = ParamPath::segment(0.0, 1.0, true, false);
    const cplx v = integrate_contour([](cplx z) { return 1.0 / std::sqrt(z); }, seg);
    CHECK(rel(v, 2.0) < 1e-10);
}

TEST_CASE("closed-form exponential: series and large-argument branches") {
    // exp(-M) for M = [[A - C, B], [B, A + C]] satisfies det = exp(-2A).
    for (cplx D : {cplx(1e-6, 0), cplx(0.3, 0.2), cplx(3, 1)}) {
        const cplx A(0.1, 0.4), B = D * 0.6, C = D * 0.8;
        const Mat2 E = expm_neg_symmetric(A, B, C);
        CHECK(rel(E.det(), std::exp(-2.0 * A)) < 1e-12);
        CHECK(rel(E.b, E.c) < 1e-15);
    }
    // Zero D: exp(-A) times the identity.
    const Mat2 E = expm_neg_symmetric(cplx(0.5), 0.0, 0.0);
    CHECK(rel(E.a, std::exp(-0.5)) < 1e-15);
    CHECK(std::abs(E.b) == 0.0);
}

TEST_CASE("transport ODE matches the closed form for a constant form") {
    const cplx A(0.2, 0.1), B(0.3, -0.4), C(-0.5, 0.2);
    const Mat2 omega{A - C, B, B, A + C};
    const auto Y = transport_ode([&](double) { return omega; }, 0.0, 1.0);
    const Mat2 ref = expm_neg_symmetric(A, B, C);
    const Mat2 got = Y.represented();
    CHECK(frobenius(got - ref) < 1e-8 * frobenius(ref));
}

TEST_CASE("scaled matrices: products, inverses and determinants") {
    std::mt19937 g(7);
    std::normal_distribution<double> n;
    for (int i = 0; i < 20; ++i) {
        Mat2 x{cplx(n(g), n(g)), cplx(n(g), n(g)), cplx(n(g), n(g)), cplx(n(g), n(g))};
        ScaledMatrix s = ScaledMatrix::from(x);
        s.log_scale += 500;  // far outside double range once represented
        const ScaledMatrix id = s * s.inverse();
        CHECK(frobenius(id.represented() - Mat2::identity()) < 1e-10);
        const ScaledMatrix u = s.unit_determinant();
        CHECK(std::abs(u.log_abs_det()) < 1e-10);
        CHECK(std::abs(std::remainder(u.det_phase(), 2 * kPi)) < 1e-10);
    }
}

TEST_CASE("bracketing root finder") {
    const double r = bracket_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0);
    CHECK(std::abs(r - 0.7390851332151607) < 1e-13);
    CHECK_THROWS_AS(bracket_root([](double x) { return x * x + 1; }, -1.0, 1.0), DomainError);
}

TEST_CASE("path geometry") {
    const auto p = ParamPath::segment(0.0, cplx(2, 0)).then(ParamPath::segment(cplx(2, 0), cplx(2, 2)));
    CHECK(p.segments() == 2);
    CHECK(std::abs(p.point(1.5) - cplx(2, 1)) < 1e-15);
    CHECK(std::abs(p.reversed().start() - cplx(2, 2)) < 1e-15);
    CHECK_THROWS(ParamPath::segment(0.0, 1.0).then(ParamPath::segment(2.0, 3.0)));
}

}
