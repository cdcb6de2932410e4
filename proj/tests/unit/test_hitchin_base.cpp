#include <doctest.h>

#include <cmath>
#include <random>

#include "hitchin/hitchin_base.hpp"

using namespace hitchin;

TEST_SUITE("hitchin_base") {

TEST_CASE("Legendre punctures") {
    const auto c = PunctureConfig::legendre(0.5);
    CHECK(c.t[0] == cplx(-2.0));
    CHECK(c.t[1] == cplx(0.0));
    CHECK(c.t[2] == cplx(1.0));
    CHECK(c.t[3] == cplx(-1.0));
    CHECK(c.t[4] == cplx(2.0));
    CHECK_THROWS_AS(PunctureConfig::legendre(1.0), DomainError);
}

TEST_CASE("residues of the Legendre point") {
    const auto q = QuadraticDifferential::make(1.0, 0.0);
    const auto tau = residues(q);
    CHECK(std::abs(tau[1] - cplx(0.0)) < 1e-15);  // nodal: a t - b vanishes at t1 = 0
    CHECK(q.nodal_index() == std::optional<int>(1));
    CHECK(std::abs(tau[2] - cplx(-1.0 / 6)) < 1e-15);
}

TEST_CASE("residues rotate with the Hopf action") {
    const auto q = QuadraticDifferential::make(cplx(0.6, 0.2), cplx(0.3, -0.7));
    for (double phi : {0.3, 2.0, 5.5}) {
        const auto a = residues(q), b = residues(q.rotated(phi));
        for (int j = 0; j < 5; ++j) {
            CHECK(std::abs(std::abs(a[j]) - std::abs(b[j])) < 1e-14);
            CHECK(std::abs(std::remainder(std::arg(b[j]) - std::arg(a[j]) - phi, 2 * kPi)) < 1e-12);
        }
    }
}

TEST_CASE("Hopf coordinates round trip") {
    std::mt19937 g(3);
    std::normal_distribution<double> n;
    for (int i = 0; i < 100; ++i) {
        cplx a(n(g), n(g)), b(n(g), n(g));
        const double s = std::sqrt(std::norm(a) + std::norm(b));
        a /= s;
        b /= s;
        const auto h = hopf_coords(a, b);
        const auto [a2, b2] = from_hopf(h);
        // Equal up to the common sign left by phi in [0, pi).
        const double plus = std::abs(a2 - a) + std::abs(b2 - b);
        const double minus = std::abs(a2 + a) + std::abs(b2 + b);
        CHECK(std::min(plus, minus) < 1e-12);
        CHECK(std::norm(a2) + std::norm(b2) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(hopf_coords(0.0, 0.0), DomainError);
}

TEST_CASE("square root with a downward cut") {
    CHECK(std::abs(sqrt_down(cplx(4, 0)) - cplx(2, 0)) < 1e-15);
    CHECK(std::abs(sqrt_down(cplx(-4, 0)) - cplx(0, 2)) < 1e-15);
    // Continuous across the negative real axis.
    CHECK(std::abs(sqrt_down(cplx(-4, 1e-12)) - sqrt_down(cplx(-4, -1e-12))) < 1e-9);
}

TEST_CASE("continuation around one simple branch point negates the root") {
    const auto q = QuadraticDifferential::make(cplx(0.8, 0.1), cplx(0.3, 0.2));
    const cplx t0 = q.config.t[0];
    const int n = 4000;
    cplx prev = sqrt_z(q, {t0 + 0.3, 1});
    const cplx first = prev;
    for (int i = 1; i <= n; ++i) {
        const cplx z = t0 + std::polar(0.3, 2 * kPi * i / n);
        cplx v = sqrt_z(q, {z, 1});
        if (std::abs(v + prev) < std::abs(v - prev)) v = -v;  // follow continuously
        prev = v;
    }
    CHECK(std::abs(prev + first) < 1e-8 * std::abs(first));
}

TEST_CASE("sheet parity") {
    const auto q = QuadraticDifferential::make(cplx(0.8, 0.1), cplx(0.3, 0.2));
    CHECK(sheet_parity(ParamPath::circle(q.config.t[0], 0.2), q) == 1);
    CHECK(sheet_parity(ParamPath::circle(0.0, 50.0), q) == 0);  // all six points
    const auto nodal = QuadraticDifferential::make(1.0, 0.0);
    CHECK(sheet_parity(ParamPath::circle(0.0, 0.2), nodal) == 0);
    CHECK_THROWS_AS(sheet_parity(ParamPath::segment(0.0, 1.0), q), DomainError);
}

TEST_CASE("branch points count to six with multiplicity") {
    for (const auto& q : {QuadraticDifferential::make(1.0, 0.0), QuadraticDifferential::make(cplx(0.3, 0.4), 0.5)}) {
        int total = 0;
        for (const auto& bp : branch_points(q)) total += bp.second;
        CHECK(total == 6);
    }
}

TEST_CASE("residue bound is attained on the unit sphere") {
    const auto cfg = PunctureConfig::legendre(0.5);
    const double bound = tau_bound(cfg);
    double seen = 0;
    for (int i = 0; i < 2000; ++i) {
        const double th = 2 * kPi * i / 2000;
        const auto tau = residues(QuadraticDifferential::make(std::cos(th), std::sin(th), 1.0, cfg));
        for (const auto& t : tau) seen = std::max(seen, std::abs(t));
    }
    CHECK(seen <= bound * (1 + 1e-12));
    CHECK(seen >= bound * 0.999);
}

}
