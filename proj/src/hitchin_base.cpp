#include "hitchin/hitchin_base.hpp"

#include <cmath>

namespace hitchin {

namespace {

constexpr double kNodalTol = 1e-13;

double seg_distance(cplx p, cplx a, cplx b) {
    cplx d = b - a;
    double t = std::clamp(std::real((p - a) * std::conj(d)) / std::norm(d), 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

double wrap_pi(double x) { return std::remainder(x, 2 * kPi); }

// +1 or -1 so that Z_+(0.5) has positive real part for a = 1, b = 0.
double anchor_sign(const PunctureConfig& cfg) {
    const cplx z{0.5, 0.0};
    cplx num = sqrt_down(z);
    cplx den = 1.0;
    for (const cplx& t : cfg.t) den *= sqrt_down(z - t);
    return std::real(num / den) >= 0 ? 1.0 : -1.0;
}

}  // namespace

PunctureConfig PunctureConfig::legendre(double k) {
    if (!(k > 0 && k < 1)) throw DomainError("Legendre configuration needs 0 < k < 1");
    PunctureConfig c;
    c.k = k;
    c.t = {cplx(-1 / k), cplx(0), cplx(1), cplx(-1), cplx(1 / k)};
    return c;
}

void PunctureConfig::validate() const {
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            if (std::abs(t[i] - t[j]) < 1e-12) throw DomainError("punctures must be distinct");
}

QuadraticDifferential QuadraticDifferential::make(cplx a, cplx b, double R, const PunctureConfig& cfg) {
    if (a == cplx(0) && b == cplx(0)) throw DomainError("(a, b) must be nonzero");
    if (!(R > 0)) throw DomainError("R must be positive");
    cfg.validate();
    QuadraticDifferential q;
    q.a = a;
    q.b = b;
    q.R = R;
    q.config = cfg;
    q.root = a != cplx(0) ? std::sqrt(a) : std::sqrt(-b);
    return q;
}

QuadraticDifferential QuadraticDifferential::rotated(double phi) const {
    QuadraticDifferential q = *this;
    cplx e = std::polar(1.0, phi);
    q.a *= e;
    q.b *= e;
    q.root *= std::polar(1.0, phi / 2);
    return q;
}

QuadraticDifferential QuadraticDifferential::with_R(double r) const {
    if (!(r > 0)) throw DomainError("R must be positive");
    QuadraticDifferential q = *this;
    q.R = r;
    return q;
}

std::optional<int> QuadraticDifferential::nodal_index() const {
    if (a == cplx(0)) return std::nullopt;
    cplx tq = b / a;
    for (int j = 0; j < 5; ++j)
        if (std::abs(tq - config.t[j]) < kNodalTol * (1 + std::abs(tq))) return j;
    return std::nullopt;
}

HopfCoords hopf_coords(cplx a, cplx b) {
    double n = std::sqrt(std::norm(a) + std::norm(b));
    if (n == 0) throw DomainError("hopf_coords of the zero vector");
    HopfCoords h;
    h.theta = std::atan2(std::abs(b), std::abs(a));
    double arg_a = std::abs(a) > 0 ? std::arg(a) : std::arg(b);
    double arg_b = std::abs(b) > 0 ? std::arg(b) : arg_a;
    double phi = 0.5 * (arg_a + arg_b);
    double varphi = 0.5 * (arg_b - arg_a);
    // (phi, varphi) and (phi + pi, varphi + pi) name the same point.
    phi = std::fmod(phi, 2 * kPi);
    if (phi < 0) phi += 2 * kPi;
    if (phi >= kPi) {
        phi -= kPi;
        varphi += kPi;
    }
    varphi = std::fmod(varphi, 2 * kPi);
    if (varphi < 0) varphi += 2 * kPi;
    h.phi = phi;
    h.varphi = varphi;
    return h;
}

std::pair<cplx, cplx> from_hopf(const HopfCoords& h) {
    return {std::cos(h.theta) * std::polar(1.0, h.phi - h.varphi),
            std::sin(h.theta) * std::polar(1.0, h.phi + h.varphi)};
}

cplx eval_Q(const QuadraticDifferential& q, cplx z) {
    cplx den = 1.0;
    for (const cplx& t : q.config.t) {
        if (std::abs(z - t) < 1e-300) throw DomainError("eval_Q at a puncture");
        den *= z - t;
    }
    return q.R * (q.a * z - q.b) / den;
}

ProjectivePoint ramification_point(const QuadraticDifferential& q) { return {q.b, q.a}; }

std::array<cplx, 5> residues(const QuadraticDifferential& q) {
    std::array<cplx, 5> tau{};
    const auto& t = q.config.t;
    for (int j = 0; j < 5; ++j) {
        cplx den = 1.0;
        for (int k = 0; k < 5; ++k)
            if (k != j) den *= t[j] - t[k];
        tau[j] = (q.a * t[j] - q.b) / den;
    }
    return tau;
}

double tau_bound(const PunctureConfig& cfg) {
    // |a t_j - b| <= sqrt(1 + |t_j|^2) for unit (a, b), with equality at (conj t_j, -1)/norm.
    double m = 0;
    for (int j = 0; j < 5; ++j) {
        cplx den = 1.0;
        for (int k = 0; k < 5; ++k)
            if (k != j) den *= cfg.t[j] - cfg.t[k];
        m = std::max(m, std::sqrt(1 + std::norm(cfg.t[j])) / std::abs(den));
    }
    return m;
}

cplx sqrt_down(cplx w) {
    static const cplx rot = std::polar(1.0, kPi / 4);
    // Keep w = -i x (x >= 0) on the cut; a signed zero would otherwise pick a side.
    cplx v = cplx(0, -1) * w;
    if (v.imag() == 0.0) v = cplx(v.real(), 0.0);
    return rot * std::sqrt(v);
}

static cplx z_value(const QuadraticDifferential& q, cplx z, int j_exact, cplx d, int sheet) {
    const auto& t = q.config.t;
    const auto nodal = q.nodal_index();
    cplx num = q.root;
    if (q.a != cplx(0) && !nodal) num *= sqrt_down(z - q.b / q.a);
    cplx den = 1.0;
    for (int j = 0; j < 5; ++j) {
        if (nodal && *nodal == j) continue;
        den *= (j == j_exact) ? sqrt_down(d) : sqrt_down(z - t[j]);
    }
    if (den == cplx(0)) throw DomainError("Z evaluated at a branch point");
    return static_cast<double>(sheet) * anchor_sign(q.config) * std::sqrt(q.R) * num / den;
}

cplx sqrt_z(const QuadraticDifferential& q, const SheetedPoint& p) {
    for (const auto& [bp, mult] : branch_points(q))
        if (mult % 2 == 1 && std::abs(p.z - bp) < 1e-300) throw DomainError("sqrt_z at a branch point");
    return z_value(q, p.z, -1, 0.0, p.sheet);
}

cplx sqrt_z_offset(const QuadraticDifferential& q, int j, cplx d, int sheet) {
    if (j < 0 || j > 4) throw DomainError("puncture index out of range");
    return z_value(q, q.config.t[j] + d, j, d, sheet);
}

std::vector<std::pair<cplx, int>> branch_points(const QuadraticDifferential& q) {
    std::vector<std::pair<cplx, int>> out;
    const auto nodal = q.nodal_index();
    for (int j = 0; j < 5; ++j) out.emplace_back(q.config.t[j], nodal && *nodal == j ? 2 : 1);
    if (q.a != cplx(0) && !nodal) out.emplace_back(q.b / q.a, 1);
    return out;
}

double winding_number(const ParamPath& loop, cplx p) {
    const auto& s = loop.samples();
    double scale = 0;
    for (const cplx& z : s) scale = std::max(scale, std::abs(z - p));
    double total = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (seg_distance(p, s[i], s[i + 1]) < 1e-12 * (1 + scale)) throw DomainError("point lies on the loop");
        total += wrap_pi(std::arg(s[i + 1] - p) - std::arg(s[i] - p));
    }
    return total / (2 * kPi);
}

int sheet_parity(const ParamPath& loop, const QuadraticDifferential& q) {
    if (!loop.closed()) throw DomainError("sheet_parity needs a closed loop");
    long count = 0;
    for (const auto& [bp, mult] : branch_points(q))
        count += std::lround(winding_number(loop, bp)) * mult;
    return static_cast<int>(((count % 2) + 2) % 2);
}

}  // namespace hitchin
