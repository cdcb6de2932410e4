#include "hitchin/transport.hpp"

#include <algorithm>
#include <cmath>

namespace hitchin {

namespace {

double seg_dist(cplx p, cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    double t = len2 > 0 ? std::real((p - a) * std::conj(d)) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

// Parameters in [0, 1] where the segment a -> b crosses a downward cut.
std::vector<double> crossings_on_segment(cplx a, cplx b, const std::vector<cplx>& cuts) {
    std::vector<double> out;
    for (const cplx& bp : cuts) {
        const double da = a.real() - bp.real(), db = b.real() - bp.real();
        if ((da >= 0) == (db >= 0)) {
            if (da == 0 && db == 0 && std::min(a.imag(), b.imag()) < bp.imag())
                throw DomainError("path runs along a branch cut");
            continue;
        }
        const double t = da / (da - db);
        const double y = a.imag() + t * (b.imag() - a.imag());
        if (y == bp.imag()) throw DomainError("path passes through a branch point");
        if (y < bp.imag()) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<cplx> cut_origins(const QuadraticDifferential& q) {
    std::vector<cplx> cuts;
    for (const auto& [bp, mult] : branch_points(q))
        if (mult % 2 == 1) cuts.push_back(bp);
    return cuts;
}

bool zero_holonomy(const AbelianHolonomy& h) {
    return std::all_of(h.h.begin(), h.h.end(), [](double x) { return x == 0.0; });
}

void check_valid_region(const ModelConnection& conn, const ParamPath& path) {
    const auto& pants = conn.pants();
    const auto& s = path.samples();
    std::vector<std::pair<cplx, double>> discs;
    double rmin = pants.radius(0);
    for (int j = 0; j < 5; ++j) {
        discs.emplace_back(pants.config.t[j], pants.radius(j));
        rmin = std::min(rmin, pants.radius(j));
    }
    const auto t = ramification_point(conn.q());
    if (!conn.q().nodal_index() && !t.at_infinity()) discs.emplace_back(t.value(), rmin);
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        for (const auto& [c, r] : discs)
            if (seg_dist(c, s[i], s[i + 1]) < r * (1 - 1e-9))
                throw DomainError("path enters a disc where the model connection is not defined");
}

}  // namespace

ModelConnection ModelConnection::make(const QuadraticDifferential& q, double R, const AbelianHolonomy& hol,
                                      const PantsData& pants, const Tolerances& tol) {
    if (!(R > 0)) throw DomainError("R must be positive");
    pants.validate();
    const auto t = ramification_point(q);
    if (!q.nodal_index() && !t.at_infinity())
        for (int j = 0; j < 5; ++j)
            if (std::abs(t.value() - pants.config.t[j]) <= pants.radius(j))
                throw DomainError("ramification point inside a circle disc");
    ModelConnection c;
    c.q_ = q.with_R(R);
    c.R_ = R;
    c.hol_ = hol;
    c.pants_ = pants;
    c.tol_ = tol;
    c.periods_ = compute_periods(q, pants, tol);
    return c;
}

ModelConnection ModelConnection::at_R(double R) const {
    if (!(R > 0)) throw DomainError("R must be positive");
    ModelConnection c = *this;
    c.R_ = R;
    c.q_ = q_.with_R(R);
    return c;
}

ModelConnection ModelConnection::with_holonomy(const AbelianHolonomy& hol) const {
    ModelConnection c = *this;
    c.hol_ = hol;
    return c;
}

cplx contour_period(const PeriodSet& p, const ContourRef& c) {
    cplx v;
    switch (c.kind) {
        case Contour::sigma: v = -2.0 * p.local.at(c.index); break;
        case Contour::eta: v = p.eta.at(c.index); break;
        case Contour::psi2: v = p.psi2; break;
        case Contour::psi3: v = p.psi3; break;
        case Contour::xi: throw DomainError("circle contours carry no diagonal transport");
    }
    return static_cast<double>(c.orientation) * v;
}

hp::complex contour_exponent(const ModelConnection& conn, const ContourRef& c, int sheet) {
    if (sheet != 1 && sheet != -1) throw DomainError("sheet must be +1 or -1");
    const double wkb = 2 * std::sqrt(conn.R()) * sheet * contour_period(conn.periods(), c).real();
    const cplx b = abelian_integral(ContourChain{{c, sheet}}, conn.holonomy());
    return hp::from(cplx(wkb, 0.0) + b);
}

int cut_crossings(const QuadraticDifferential& q, const ParamPath& path) {
    const auto cuts = cut_origins(q);
    const auto& s = path.samples();
    int n = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) n += static_cast<int>(crossings_on_segment(s[i], s[i + 1], cuts).size());
    return n;
}

hp::Mat2 diagonal_transport_hp(const ModelConnection& conn, const ParamPath& path, int start_sheet, int* end_sheet) {
    if (start_sheet != 1 && start_sheet != -1) throw DomainError("sheet must be +1 or -1");
    check_valid_region(conn, path);
    hp::Mat2 M = hp::Mat2::identity();
    int sheet = start_sheet;

    std::vector<ContourRef> chain;
    bool decomposed = true;
    try {
        chain = decompose_path(path, conn.pants());
    } catch (const DomainError&) {
        decomposed = false;
    }
    if (decomposed) {
        for (const auto& c : chain) M = hp::diag_exp(contour_exponent(conn, c, sheet)) * M;
        if (end_sheet) *end_sheet = sheet;
        return M;
    }
    if (!zero_holonomy(conn.holonomy()))
        throw DomainError("abelian part is only known on chains of pants contours");

    const QuadraticDifferential unit = conn.q().with_R(1.0);
    const auto cuts = cut_origins(unit);
    const double rt = std::sqrt(conn.R());
    const hp::Mat2 swap = hp::Mat2{hp::complex(0), hp::complex(1), hp::complex(1), hp::complex(0)};
    const auto& s = path.samples();
    std::vector<cplx> piece{s.front()};
    auto flush = [&]() {
        if (piece.size() < 2) return;
        ParamPath p(piece);
        const cplx integral = integrate_contour([&](cplx z) { return sqrt_z(unit, {z, sheet}); }, p, conn.tolerances());
        M = hp::diag_exp(hp::from(cplx(2 * rt * integral.real(), 0.0))) * M;
    };
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        for (double t : crossings_on_segment(s[i], s[i + 1], cuts)) {
            const cplx z = s[i] + t * (s[i + 1] - s[i]);
            if (std::abs(z - piece.back()) > 0) piece.push_back(z);
            flush();
            M = swap * M;
            sheet = -sheet;
            piece.assign(1, z);
        }
        if (std::abs(s[i + 1] - piece.back()) > 0) piece.push_back(s[i + 1]);
    }
    flush();
    if (end_sheet) *end_sheet = sheet;
    return M;
}

ScaledMatrix to_scaled(const hp::Mat2& m) {
    const hp::real mx = hp::max_abs(m);
    if (mx == 0) throw NumericError("zero matrix");
    const hp::complex inv(hp::real(1) / mx);
    const hp::Mat2 n = m.scaled(inv);
    ScaledMatrix out;
    out.m = {hp::to_double(n.a), hp::to_double(n.b), hp::to_double(n.c), hp::to_double(n.d)};
    out.log_scale = static_cast<double>(boost::multiprecision::log(mx));
    return out;
}

ScaledMatrix diagonal_transport(const ModelConnection& conn, const ParamPath& path, int start_sheet) {
    return to_scaled(diagonal_transport_hp(conn, path, start_sheet));
}

hp::Mat2 rh_xi_hp(const LocalRhParams& p) {
    const hp::complex C = hp::from(p.C);
    if (p.nodal) return {hp::complex(0), hp::I() * hp::expc(-C), hp::I() * hp::expc(C), hp::complex(0)};
    const hp::real pi = boost::multiprecision::acos(hp::real(-1));
    const hp::complex A = hp::I() * hp::complex(pi * 3 / 2);
    const hp::Mat2 E = expm_neg_symmetric_t<hp::complex>(A, hp::from(p.B), C);
    return {E.c, E.d, E.a, E.b};  // transposition applied on the left
}

hp::Mat2 lasso_monodromy(const ModelConnection& conn, int j) {
    if (j < 0 || j > 4) throw DomainError("puncture index out of range");
    const auto nodal = conn.q().nodal_index();
    const auto params = rh_xi_params(conn.R(), conn.periods().local[j], nodal && *nodal == j);
    const hp::complex x = contour_exponent(conn, {Contour::eta, j, 1}, 1);
    return hp::diag_exp(-x) * rh_xi_hp(params) * hp::diag_exp(x);
}

hp::Mat2 loop_monodromy_hp(const ModelConnection& conn, Loop which) {
    // Each lasso is read in the frame of sheet +1 at its base point; the
    // transposition inside RH[xi_j] carries the sheet change.
    if (which == Loop::zeta2) return lasso_monodromy(conn, 2) * lasso_monodromy(conn, 1);
    return lasso_monodromy(conn, 4) * lasso_monodromy(conn, 0);
}

ScaledMatrix loop_monodromy(const ModelConnection& conn, Loop which) { return to_scaled(loop_monodromy_hp(conn, which)); }

hp::complex length_coordinate(const ModelConnection& conn, Loop which) { return loop_monodromy_hp(conn, which).trace(); }

PantsSystem model_pants_system(const ModelConnection& conn, int xi3_sign) {
    if (xi3_sign != 1 && xi3_sign != -1) throw DomainError("xi3 sign must be +1 or -1");
    std::array<hp::Mat2, 5> X;
    for (int j = 0; j < 5; ++j) X[j] = lasso_monodromy(conn, j);
    const hp::Mat2 psi2 = hp::diag_exp(contour_exponent(conn, {Contour::psi2, -1, 1}, 1));
    const hp::Mat2 psi3 = hp::diag_exp(contour_exponent(conn, {Contour::psi3, -1, 1}, 1));
    PantsSystem s;
    s.xi1 = X[1];
    s.xi2 = X[2].inverse();
    s.rho2 = X[2] * X[1];
    s.xi3 = xi3_sign == 1 ? X[3] : X[3].inverse();
    s.rho3 = X[4] * X[0];
    s.rho3_x3 = psi3.inverse() * s.rho3 * psi3;
    s.xi4 = X[4];
    s.xi0 = X[0];
    s.psi2 = psi2;
    s.psi3 = psi3;
    return s;
}

FNCoords model_coordinates(const ModelConnection& conn, int xi3_sign) {
    ExtractOptions opt;
    opt.reading2 = TwistReading::row;
    opt.reading3 = TwistReading::column;
    opt.eigen = EigenMode::boundary;
    return extract_coords(model_pants_system(conn, xi3_sign), opt);
}

}  // namespace hitchin
