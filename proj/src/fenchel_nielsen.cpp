#include "hitchin/fenchel_nielsen.hpp"

#include <algorithm>
#include <cmath>

namespace hitchin {

namespace {

using hp::complex;
using hp::real;
using HM = hp::Mat2;

real frob(const HM& m) {
    using boost::multiprecision::abs;
    using boost::multiprecision::sqrt;
    real s = 0;
    for (const complex* e : {&m.a, &m.b, &m.c, &m.d}) {
        real x = abs(*e);
        s += x * x;
    }
    return sqrt(s);
}

double rel_defect(const HM& x, const HM& y) {
    real n = std::max(frob(x), frob(y));
    if (n == 0) return 0;
    return static_cast<double>(frob(x - y) / n);
}

// Eigenvector of Y for the eigenvalue lam, from whichever adjugate column is larger.
std::array<complex, 2> eigenvector(const HM& Y, const complex& lam) {
    using boost::multiprecision::abs;
    std::array<complex, 2> v1{Y.b, lam - Y.a}, v2{lam - Y.d, Y.c};
    real n1 = abs(v1[0]) + abs(v1[1]), n2 = abs(v2[0]) + abs(v2[1]);
    if (n1 == 0 && n2 == 0) throw NumericError("degenerate eigenvector");
    return n1 >= n2 ? v1 : v2;
}

}  // namespace

double projective_distance(const ProjectivePair& a, const ProjectivePair& b) {
    using boost::multiprecision::abs;
    using boost::multiprecision::sqrt;
    real na = sqrt(abs(a.p) * abs(a.p) + abs(a.q) * abs(a.q));
    real nb = sqrt(abs(b.p) * abs(b.p) + abs(b.q) * abs(b.q));
    if (na == 0 || nb == 0) throw DomainError("projective pair (0, 0)");
    return static_cast<double>(abs(a.p * b.q - a.q * b.p) / (na * nb));
}

SimpsonScalars simpson_scalars(const complex& l1, const complex& l2, const complex& l3, const complex& l4) {
    const complex cp = hp::I(), cm = -hp::I();
    auto u = [&](const complex& lprev, const complex& l) { return (lprev - cm * l) / (cp - cm); };
    SimpsonScalars s;
    s.u2 = u(l1, l2);
    s.u3 = u(l2, l3);
    s.u4 = u(l3, l4);
    s.w2 = s.u2 * (l2 - s.u2) - complex(1);
    s.w3 = s.u3 * (l3 - s.u3) - complex(1);
    s.w4 = s.u4 * (l4 - s.u4) - complex(1);
    return s;
}

double PantsSystem::relation_residual() const {
    double r = rel_defect(xi2 * rho2, xi1);
    r = std::max(r, rel_defect(psi2 * rho2 * psi2.inverse(), xi3 * rho3_x3));
    r = std::max(r, rel_defect(psi3 * rho3_x3 * psi3.inverse(), rho3));
    r = std::max(r, rel_defect(xi4 * xi0, rho3));
    return r;
}

PantsSystem PantsSystem::conjugated(const HM& g) const {
    const HM gi = g.inverse();
    auto c = [&](const HM& m) { return g * m * gi; };
    PantsSystem s = *this;
    s.xi1 = c(xi1);
    s.xi2 = c(xi2);
    s.rho2 = c(rho2);
    s.xi3 = c(xi3);
    s.rho3_x3 = c(rho3_x3);
    s.xi4 = c(xi4);
    s.xi0 = c(xi0);
    s.rho3 = c(rho3);
    s.psi2 = c(psi2);
    s.psi3 = c(psi3);
    return s;
}

HM standard_A() { return HM::diag(hp::I(), -hp::I()); }

HM standard_R(const complex& u, const complex& w, const complex& l) { return {u, complex(1), w, l - u}; }

HM standard_U(const complex& u) { return {complex(1), complex(0), u, complex(1)}; }

HM sqrt_A(int branch) {
    if (branch != 1 && branch != -1) throw DomainError("square-root branch must be +1 or -1");
    const real q = boost::multiprecision::atan(real(1));  // pi / 4
    complex e(boost::multiprecision::cos(q), boost::multiprecision::sin(q));
    complex s(branch);
    return HM::diag(s * e, s / e);
}

HM normalize_pants(const HM& xi, const HM& rho, EigenMode mode) {
    using boost::multiprecision::abs;
    using boost::multiprecision::sqrt;
    complex lp = hp::I(), lm = -hp::I();
    if (mode == EigenMode::computed) {
        const complex tr = xi.trace();
        const complex disc = sqrt(tr * tr - complex(4) * xi.det());
        if (abs(disc) < real(1e-30) * (abs(tr) + 1)) throw NumericError("boundary eigenvalues collide");
        lp = (tr + disc) / complex(2);
        lm = (tr - disc) / complex(2);
        // lp is the eigenvalue closer to +i.
        if (abs(lp - hp::I()) > abs(lm - hp::I())) std::swap(lp, lm);
    }
    auto v1 = eigenvector(xi, lp), v2 = eigenvector(xi, lm);
    HM hinv{v1[0], v2[0], v1[1], v2[1]};
    HM h = hinv.inverse();
    const complex off = (h * rho * hinv).b;
    if (abs(off) == 0) throw NumericError("reducible restriction: rho preserves an eigenline of xi");
    // Scaling the second column of h^{-1} by beta multiplies the (1,2) entry by beta.
    hinv.b /= off;
    hinv.d /= off;
    h = hinv.inverse();
    real mx = hp::max_abs(h);
    complex scale(real(1) / mx);
    // Fix the phase too: the largest entry becomes exactly 1.
    for (const complex* e : {&h.a, &h.b, &h.c, &h.d})
        if (abs(*e) == mx) {
            scale = complex(1) / *e;
            break;
        }
    return h.scaled(scale);
}

ProjectivePair twist_from_Q(const HM& Q, const complex& l, TwistReading mode, double tol, double* residual) {
    ProjectivePair out;
    if (mode == TwistReading::column) {
        out.q = Q.b;
        out.p = Q.d - l * Q.b;
    } else {
        out.p = Q.a;
        out.q = Q.b;
    }
    const HM ref{out.p, out.q, -out.q, out.p + l * out.q};
    double res = rel_defect(Q, ref);
    if (residual) *residual = res;
    if (mode == TwistReading::strict && !(res <= tol))
        throw NumericError("gluing matrix does not have the twist shape (residual " + std::to_string(res) + ")");
    using boost::multiprecision::abs;
    if (abs(out.p) == 0 && abs(out.q) == 0) throw NumericError("twist pair vanishes");
    return out;
}

GluingMatrices gluing_matrices(const PantsSystem& s, const complex& l2, const complex& l3, int sqrt_branch,
                               EigenMode mode) {
    GluingMatrices g;
    g.h2 = normalize_pants(s.xi2, s.rho2, mode);
    g.h3 = normalize_pants(s.xi3, s.rho3_x3, mode);
    g.h4 = normalize_pants(s.xi4, s.xi0, mode);
    g.P2 = g.h3 * s.psi2 * g.h2.inverse();
    g.P3 = g.h4 * s.psi3 * g.h3.inverse();
    const auto sc = simpson_scalars(complex(0), l2, l3, complex(0));
    const HM iroot = sqrt_A(sqrt_branch).inverse();
    g.Q2 = iroot * standard_U(sc.u3) * g.P2 * standard_U(sc.u2).inverse();
    g.Q3 = iroot * standard_U(sc.u4) * g.P3 * standard_U(sc.u3).inverse();
    return g;
}

FNCoords extract_coords(const PantsSystem& s, const ExtractOptions& opt) {
    FNCoords c;
    c.l2 = s.rho2.trace();
    c.l3 = s.rho3.trace();
    using boost::multiprecision::abs;
    for (const complex* l : {&c.l2, &c.l3})
        if (abs(*l - complex(2)) < real(1e-12) || abs(*l + complex(2)) < real(1e-12))
            throw DomainError("length coordinate equals +-2; twists undefined");
    const auto g = gluing_matrices(s, c.l2, c.l3, opt.sqrt_branch, opt.eigen);
    c.twist2 = twist_from_Q(g.Q2, c.l2, opt.reading2, opt.shape_tol, &c.shape_residual2);
    c.twist3 = twist_from_Q(g.Q3, c.l3, opt.reading3, opt.shape_tol, &c.shape_residual3);
    return c;
}

PantsSystem build_representation(const FNCoords& c, int sqrt_branch) {
    using boost::multiprecision::abs;
    for (const complex* l : {&c.l2, &c.l3})
        if (abs(*l - complex(2)) < real(1e-12) || abs(*l + complex(2)) < real(1e-12))
            throw DomainError("length coordinate equals +-2");
    auto nondeg = [](const ProjectivePair& t, const complex& l) {
        return abs(t.p * t.p + l * t.p * t.q + t.q * t.q) > real(1e-14) * (abs(t.p) * abs(t.p) + abs(t.q) * abs(t.q));
    };
    if (!nondeg(c.twist2, c.l2) || !nondeg(c.twist3, c.l3)) throw DomainError("twist pair on the excluded quadric");

    const auto sc = simpson_scalars(complex(0), c.l2, c.l3, complex(0));
    const HM A = standard_A();
    const HM R2 = standard_R(sc.u2, sc.w2, c.l2);
    const HM R3 = standard_R(sc.u3, sc.w3, c.l3);
    const HM R4 = standard_R(sc.u4, sc.w4, complex(0));
    auto Q = [](const ProjectivePair& t, const complex& l) { return HM{t.p, t.q, -t.q, t.p + l * t.q}; };
    const HM root = sqrt_A(sqrt_branch);

    PantsSystem s;
    s.xi2 = A;
    s.rho2 = R2;
    s.xi1 = A * R2;
    s.xi3 = A;
    s.rho3_x3 = R3;
    s.xi4 = A;
    s.xi0 = R4;
    s.rho3 = A * R4;
    s.psi2 = standard_U(sc.u3).inverse() * root * Q(c.twist2, c.l2) * standard_U(sc.u2);
    s.psi3 = standard_U(sc.u4).inverse() * root * Q(c.twist3, c.l3) * standard_U(sc.u3);
    return s;
}

}  // namespace hitchin
