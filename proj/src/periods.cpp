#include "hitchin/periods.hpp"

#include <cmath>

namespace hitchin {

ParamPath upper_detour(cplx x, cplx y, double height) {
    const cplx up{0.0, height};
    return ParamPath({x, x + up, y + up, y});
}

double PantsData::solve_x4(const PunctureConfig& cfg, double epsilon) {
    const auto q = QuadraticDifferential::make(1.0, 0.0, 1.0, cfg);
    const cplx t2 = cfg.t[2], t4 = cfg.t[4];
    const cplx x3 = t2 - epsilon;
    const double target =
        2 * std::abs(integrate_from_singular([&](cplx d) { return sqrt_z_offset(q, 2, d); }, t2, x3));
    // Unknown is the offset of x4 from t4.
    auto f = [&](double d) {
        if (d == 0) return -target;
        return std::abs(integrate_from_singular([&](cplx w) { return sqrt_z_offset(q, 4, w); }, t4, t4 + d)) -
               target;
    };
    double hi = epsilon;
    while (f(hi) < 0) {
        hi *= 2;
        if (hi > 1e6) throw NumericError("no base point x4 satisfies the defining equation");
    }
    return t4.real() + bracket_root(f, 0.0, hi, 1e-15);
}

PantsData PantsData::legendre(const PunctureConfig& cfg, double epsilon, double s2, double s3, double s4,
                              double height) {
    if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
    PantsData p;
    p.epsilon = epsilon;
    p.height = height;
    p.config = cfg;
    p.x2 = cfg.t[3] - epsilon;
    p.x3 = cfg.t[2] - epsilon;
    p.x4 = solve_x4(cfg, epsilon);
    p.s2 = s2;
    p.s3 = s3;
    p.s4 = s4;
    p.validate();
    return p;
}

double PantsData::radius(int j) const {
    switch (j) {
        case 1:
        case 2: return s2;
        case 3: return s3;
        case 0:
        case 4: return s4;
        default: throw DomainError("puncture index out of range");
    }
}

cplx PantsData::base(int j) const {
    switch (j) {
        case 1:
        case 2: return x2;
        case 3: return x3;
        case 0:
        case 4: return x4;
        default: throw DomainError("puncture index out of range");
    }
}

void PantsData::validate() const {
    if (!(s2 > 0 && s3 > 0 && s4 > 0)) throw DomainError("disc radii must be positive");
    if (!(height > 0)) throw DomainError("detour height must be positive");
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            if (std::abs(config.t[i] - config.t[j]) <= radius(i) + radius(j))
                throw DomainError("puncture discs overlap");
    for (cplx x : {x2, x3, x4})
        for (int j = 0; j < 5; ++j)
            if (std::abs(x - config.t[j]) <= radius(j)) throw DomainError("base point inside a puncture disc");
}

ParamPath PantsData::sigma(int j) const {
    return ParamPath::segment(config.t[j], config.t[j] + radius(j), true, false);
}

ParamPath PantsData::eta(int j) const { return upper_detour(base(j), config.t[j] + radius(j), height); }

ParamPath PantsData::xi(int j, int n) const { return ParamPath::circle(config.t[j], radius(j), n, 0.0); }

ParamPath PantsData::psi2() const { return upper_detour(x2, x3, height); }

ParamPath PantsData::psi3() const { return upper_detour(x3, x4, height); }

ParamPath PantsData::path(const ContourRef& c) const {
    ParamPath p;
    switch (c.kind) {
        case Contour::sigma: p = sigma(c.index); break;
        case Contour::eta: p = eta(c.index); break;
        case Contour::xi: p = xi(c.index); break;
        case Contour::psi2: p = psi2(); break;
        case Contour::psi3: p = psi3(); break;
    }
    return c.orientation > 0 ? p : p.reversed();
}

static std::vector<ContourRef> lasso_pair(int i, int j) {
    return {{Contour::eta, i, 1}, {Contour::xi, i, 1}, {Contour::eta, i, -1},
            {Contour::eta, j, 1}, {Contour::xi, j, 1}, {Contour::eta, j, -1}};
}

std::vector<ContourRef> PantsData::rho2_chain() const { return lasso_pair(1, 2); }
std::vector<ContourRef> PantsData::rho3_chain() const { return lasso_pair(0, 4); }

ParamPath PantsData::chain_path(const std::vector<ContourRef>& chain) const {
    if (chain.empty()) throw DomainError("empty contour chain");
    ParamPath p = path(chain.front());
    for (std::size_t i = 1; i < chain.size(); ++i) p = p.then(path(chain[i]));
    return p;
}

PeriodSet compute_periods(const QuadraticDifferential& q0, const PantsData& pants, const Tolerances& tol) {
    const QuadraticDifferential q = q0.with_R(1.0);
    const auto tau = residues(q);
    PeriodSet out;
    auto Z = [&](cplx z) { return sqrt_z(q, {z, 1}); };
    for (int j = 0; j < 5; ++j) {
        const cplx tj = pants.config.t[j];
        const double s = pants.radius(j);
        cplx sig = integrate_from_singular([&](cplx d) { return sqrt_z_offset(q, j, d); }, tj, tj + s, tol);
        out.eta[j] = integrate_contour(Z, pants.eta(j), tol);
        out.local[j] = -0.5 * sig;
        out.pi[j] = out.eta[j] - sig;
        cplx rt = std::sqrt(tau[j]);
        if (std::real(std::conj(rt) * out.local[j]) < 0) rt = -rt;
        out.sqrt_tau[j] = rt;
    }
    out.psi2 = integrate_contour(Z, pants.psi2(), tol);
    out.psi3 = integrate_contour(Z, pants.psi3(), tol);
    return out;
}

cplx legendre_period_closed_form(double k, LegendreDifference which) {
    double v = -k * elliptic_k(k);
    return which == LegendreDifference::p1_minus_p2 ? v : 2 * v;
}

AbelianHolonomy AbelianHolonomy::make(std::array<double, 4> phases, std::array<int, 4> signs) {
    AbelianHolonomy h;
    for (int i = 0; i < 4; ++i) {
        if (signs[i] != 1 && signs[i] != -1) throw DomainError("orientation signs must be +1 or -1");
        double x = std::fmod(phases[i], 2 * kPi);
        if (x < 0) x += 2 * kPi;
        h.h[i] = x;
    }
    h.orientation_signs = signs;
    return h;
}

ContourChain lift_chain(const std::vector<ContourRef>& chain, int start_sheet, const QuadraticDifferential& q) {
    if (start_sheet != 1 && start_sheet != -1) throw DomainError("sheet must be +1 or -1");
    const auto nodal = q.nodal_index();
    ContourChain out;
    int sheet = start_sheet;
    for (const auto& c : chain) {
        out.push_back({c, sheet});
        if (c.kind == Contour::xi && !(nodal && *nodal == c.index)) sheet = -sheet;
    }
    return out;
}

std::vector<ContourRef> decompose_path(const ParamPath& path, const PantsData& pants) {
    std::vector<ContourRef> candidates;
    for (int j = 0; j < 5; ++j)
        for (Contour k : {Contour::xi, Contour::eta, Contour::sigma})
            for (int o : {1, -1}) candidates.push_back({k, j, o});
    for (Contour k : {Contour::psi2, Contour::psi3})
        for (int o : {1, -1}) candidates.push_back({k, -1, o});

    const auto& s = path.samples();
    std::vector<ContourRef> out;
    std::size_t i = 0;
    while (i + 1 < s.size()) {
        bool found = false;
        for (const auto& c : candidates) {
            const ParamPath cp = pants.path(c);
            const auto& cs = cp.samples();
            if (i + cs.size() > s.size()) continue;
            bool match = true;
            for (std::size_t m = 0; m < cs.size() && match; ++m)
                match = std::abs(cs[m] - s[i + m]) <= 1e-12 * (1 + std::abs(cs[m]));
            if (match) {
                out.push_back(c);
                i += cs.size() - 1;
                found = true;
                break;
            }
        }
        if (!found) throw DomainError("path is not a chain of pants contours");
    }
    return out;
}

cplx abelian_integral(const ContourChain& chain, const AbelianHolonomy& hol) {
    const cplx I{0.0, 1.0};
    auto weight = [&](const ContourRef& c) -> cplx {
        auto w = [&](int slot) { return 0.5 * I * hol.h[slot] * static_cast<double>(hol.orientation_signs[slot]); };
        switch (c.kind) {
            case Contour::eta:
                if (c.index == 2) return w(0);
                if (c.index == 4) return w(1);
                return 0.0;
            case Contour::psi2: return w(2);
            case Contour::psi3: return w(3);
            default: return 0.0;
        }
    };
    cplx total = 0;
    for (const auto& step : chain)
        total += static_cast<double>(step.contour.orientation * step.sheet) * weight(step.contour);
    return total;
}

cplx abelian_integral(const ParamPath& path, int start_sheet, const AbelianHolonomy& hol,
                      const QuadraticDifferential& q, const PantsData& pants) {
    return abelian_integral(lift_chain(decompose_path(path, pants), start_sheet, q), hol);
}

}  // namespace hitchin
