#include "hitchin/asymptotics.hpp"

#include <cmath>

namespace hitchin {

namespace {

// int over eta_i - eta_j of B, read from the holonomy.
cplx b_difference(const AbelianHolonomy& hol, Which which) {
    if (which == Which::two)
        return abelian_integral(ContourChain{{{Contour::eta, 2, 1}, 1}, {{Contour::eta, 1, -1}, 1}}, hol);
    return abelian_integral(ContourChain{{{Contour::eta, 4, 1}, 1}, {{Contour::eta, 0, -1}, 1}}, hol);
}

// Distance of x / pi from the nearest integer, in units of pi.
double mod_pi_distance(double x) { return std::abs(std::remainder(x, kPi)); }

struct PairData {
    cplx pi_diff;   // pi_i - pi_j for (1, 2) or (0, 4)
    cplx om_diff;   // omega_i - omega_j
    cplx eta_diff;  // eta_i - eta_j
};

PairData pair(const PeriodSet& p, Which which) {
    const int i = which == Which::two ? 1 : 0, j = which == Which::two ? 2 : 4;
    return {p.pi[i] - p.pi[j], p.local[i] - p.local[j], p.eta[i] - p.eta[j]};
}

PeriodSet negated(PeriodSet p) {
    for (int j = 0; j < 5; ++j) {
        p.pi[j] = -p.pi[j];
        p.eta[j] = -p.eta[j];
        p.local[j] = -p.local[j];
        p.sqrt_tau[j] = -p.sqrt_tau[j];
    }
    p.psi2 = -p.psi2;
    p.psi3 = -p.psi3;
    return p;
}

Inequality less(std::string name, double lhs, double rhs, double tol) {
    Inequality q;
    q.name = std::move(name);
    q.lhs = lhs;
    q.rhs = rhs;
    q.holds = lhs < rhs;
    q.tie = std::abs(lhs - rhs) <= tol * (1 + std::abs(lhs) + std::abs(rhs));
    return q;
}

TwistCaseReport classify2(const PeriodSet& p, const AbelianHolonomy& hol, double tol, bool mirrored);
TwistCaseReport classify3(const PeriodSet& p, const AbelianHolonomy& hol, double tol, bool mirrored);

TwistCaseReport classify2(const PeriodSet& p, const AbelianHolonomy& hol, double tol, bool mirrored) {
    const auto& w = p.local;
    const double D = std::abs((p.pi[1] - p.pi[2]).real());
    const double E = 2 * (w[1] - w[2]).real();
    const double scale = 1 + D + std::abs(E);
    if (D <= tol) throw DomainError("Re(pi1 - pi2) vanishes; the twist limit is not classified");

    TwistCaseReport r;
    r.which = Which::two;
    r.mirrored = mirrored;
    const auto first = less("psi2 vs local", p.psi2.real(), 2 * (w[2] - w[3]).real(), tol);
    r.inequalities.push_back(first);
    Inequality eq;
    eq.name = "|Re(pi1 - pi2)| vs 2 Re(omega1 - omega2)";
    eq.lhs = D;
    eq.rhs = E;
    eq.tie = std::abs(D - std::abs(E)) <= tol * scale;
    eq.holds = eq.tie;
    r.inequalities.push_back(eq);
    r.tie = first.tie;

    if (!eq.tie) {
        r.limit = Limit::one_zero;
        if (D > std::abs(E)) {
            r.case_id = first.holds ? 1 : 3;
            r.rate = 4 * D;
        } else {
            r.case_id = first.holds ? 2 : 4;
            r.rate = 4 * std::abs(E);
        }
        r.rate_alt = r.rate;
        return r;
    }
    if (!first.holds) {
        if (mirrored) throw NumericError("twist case table is not closed under the sign change");
        auto m = classify2(negated(p), hol, tol, true);
        m.tie = m.tie || r.tie;
        return m;
    }
    const double bhalf = b_difference(hol, Which::two).imag();  // int B = i * bhalf
    const bool plus = E > 0;
    const double target = plus ? 0.0 : kPi / 2;
    const bool congruent = mod_pi_distance(bhalf - target) <= tol;
    r.case_id = plus ? (congruent ? 5 : 6) : (congruent ? 7 : 8);
    if (!congruent) {
        r.limit = Limit::one_zero;
        r.rate = r.rate_alt = 4 * D;
        return r;
    }
    // p2/q2 ~ exp(sqrt(R) (4 D + 4 Re psi2 - 8 Re(omega2 - omega3))).
    r.rate = 4 * D + 4 * p.psi2.real() - 8 * (w[2] - w[3]).real();
    r.rate_alt = -8 * (2.0 * w[2] - w[1] - w[3]).real() + 4 * p.psi2.real();
    const auto third = less("psi2 vs inequality3", p.psi2.real(), 2 * (2.0 * w[2] - w[1] - w[3]).real(), tol);
    r.inequalities.push_back(third);
    r.tie = r.tie || third.tie;
    r.limit = r.rate < 0 ? Limit::zero_one : Limit::one_zero;
    return r;
}

TwistCaseReport classify3(const PeriodSet& p, const AbelianHolonomy& hol, double tol, bool mirrored) {
    const auto& w = p.local;
    const double D = std::abs((p.pi[0] - p.pi[4]).real());
    const double E = 2 * (w[0] - w[4]).real();
    const double scale = 1 + D + std::abs(E);
    if (D <= tol) throw DomainError("Re(pi0 - pi4) vanishes; the twist limit is not classified");

    TwistCaseReport r;
    r.which = Which::three;
    r.mirrored = mirrored;
    Inequality eq;
    eq.name = "|Re(pi0 - pi4)| vs 2 Re(omega0 - omega4)";
    eq.lhs = D;
    eq.rhs = E;
    eq.tie = std::abs(D - std::abs(E)) <= tol * scale;
    eq.holds = eq.tie;
    r.inequalities.push_back(eq);

    if (!eq.tie) {
        r.limit = Limit::one_zero;
        r.case_id = D > std::abs(E) ? 1 : 2;
        r.rate = r.rate_alt = 4 * std::max(D, std::abs(E));
        return r;
    }
    if (E < 0) {
        if (mirrored) throw NumericError("twist case table is not closed under the sign change");
        return classify3(negated(p), hol, tol, true);
    }
    const double bhalf = b_difference(hol, Which::three).imag();
    const bool congruent = mod_pi_distance(bhalf) <= tol;
    r.case_id = congruent ? 5 : 6;
    if (!congruent) {
        r.limit = Limit::one_zero;
        r.rate = r.rate_alt = 4 * D;
        return r;
    }
    const double local = (w[3] + w[0] - 2.0 * w[4]).real();
    // The statement doubles the psi3 integral; the derivation does not.
    r.rate = -4 * p.psi3.real() + 8 * local;
    r.rate_alt = -2 * p.psi3.real() + 8 * local;
    // Written as lhs < rhs: 2 Re(...) < int_psi3 Re Z.
    const auto fourth = less("inequality4 (reversed)", 2 * local, p.psi3.real(), tol);
    const auto leading = less("q3 leading term (reversed)", 2 * (w[3] - w[4]).real(), p.psi3.real(), tol);
    r.inequalities.push_back(fourth);
    r.inequalities.push_back(leading);
    r.tie = fourth.tie || leading.tie;
    r.limit = fourth.holds ? Limit::zero_one : Limit::one_zero;
    return r;
}

}  // namespace

LogForm LogForm::of(const hp::complex& z) {
    if (z == hp::complex(0)) throw DomainError("log form of zero");
    return {hp::log_abs(z), hp::arg(z)};
}

hp::complex LogForm::value() const {
    return hp::expc(hp::complex(hp::real(log_abs), hp::real(phase)));
}

LengthPrediction predict_l(const ModelConnection& conn, Which which) {
    const auto d = pair(conn.periods(), which);
    LengthPrediction out;
    // pi_j - pi_i = -(pi_i - pi_j)
    const double re = -d.pi_diff.real();
    out.degenerate = std::abs(re) < 1e-13;
    const cplx c = 2.0 * b_difference(conn.holonomy(), which) + cplx(4 * std::sqrt(conn.R()) * re, 0.0);
    out.argument = hp::from(c);
    out.exact = -(hp::expc(out.argument) + hp::expc(-out.argument));
    out.value = LogForm::of(out.exact);
    return out;
}

LengthPrediction predict_l(const QuadraticDifferential& q, const PantsData& pants, const AbelianHolonomy& hol,
                           double R, Which which) {
    return predict_l(ModelConnection::make(q, R, hol, pants), which);
}

TwistCaseReport predict_twist(const ModelConnection& conn, Which which, double tie_tol) {
    return which == Which::two ? classify2(conn.periods(), conn.holonomy(), tie_tol, false)
                               : classify3(conn.periods(), conn.holonomy(), tie_tol, false);
}

TwistCaseReport predict_twist(const QuadraticDifferential& q, const PantsData& pants, const AbelianHolonomy& hol,
                              Which which, double tie_tol) {
    return predict_twist(ModelConnection::make(q, 1.0, hol, pants), which, tie_tol);
}

namespace {

double angle_function(const PairData& d, AngleMode mode, double phi) {
    const cplx e = std::polar(1.0, phi / 2);
    return std::real(e * (mode == AngleMode::match ? d.eta_diff : d.pi_diff));
}

}  // namespace

double angle_residual(const QuadraticDifferential& q, const PantsData& pants, Which which, AngleMode mode,
                      double phi) {
    return angle_function(pair(compute_periods(q, pants), which), mode, phi);
}

double critical_angle(const QuadraticDifferential& q, const PantsData& pants, Which which, AngleMode mode,
                      int scan) {
    const auto d = pair(compute_periods(q, pants), which);
    if (std::abs(mode == AngleMode::match ? d.eta_diff : d.pi_diff) == 0)
        throw DomainError("period difference vanishes; no critical angle");
    auto f = [&](double phi) { return angle_function(d, mode, phi); };
    for (int n = std::max(scan, 4); n <= 4096; n *= 2) {
        std::vector<std::pair<double, double>> brackets;
        double prev = f(0.0);
        if (prev == 0.0) return 0.0;
        for (int k = 1; k <= n; ++k) {
            const double x0 = 2 * kPi * (k - 1) / n, x1 = 2 * kPi * k / n;
            const double cur = f(x1);
            if ((prev < 0) != (cur < 0) || cur == 0.0) brackets.emplace_back(x0, x1);
            prev = cur;
        }
        if (brackets.size() == 1) {
            double phi = bracket_root(f, brackets[0].first, brackets[0].second, 1e-15);
            phi = std::fmod(phi, 2 * kPi);
            return phi < 0 ? phi + 2 * kPi : phi;
        }
        if (brackets.empty()) throw NumericError("no critical angle found");
    }
    throw NumericError("critical angle is not unique");
}

QuadraticDifferential section_point(const QuadraticDifferential& q, const PantsData& pants, Which which,
                                    AngleMode mode) {
    return q.rotated(critical_angle(q, pants, which, mode));
}

namespace {

double rotation_for(const PairData& d) {
    double theta = kPi / 2 - std::arg(d.eta_diff);
    if (std::real(std::polar(1.0, theta) * d.om_diff) < 0) theta += kPi;
    return std::fmod(2 * theta + 8 * kPi, 4 * kPi);
}

}  // namespace

double section_rotation(const QuadraticDifferential& q0, const PantsData& pants) {
    return rotation_for(pair(compute_periods(q0, pants), Which::two));
}

QStarResult find_qstar(const PunctureConfig& config, double epsilon, const QStarOptions& opt) {
    if (!(epsilon > 0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 0.5)");
    const QuadraticDifferential q0 = QuadraticDifferential::make(1.0, 0.0, 1.0, config);
    const double x4 = PantsData::solve_x4(config, epsilon);
    const double s4_max = 0.9 * (x4 - config.t[4].real());

    auto pants_for = [&](double s4) {
        return PantsData::legendre(config, epsilon, opt.s2, opt.s3, s4, opt.height);
    };
    // The (1, 2) data do not depend on s4.
    const auto base = pair(compute_periods(q0, pants_for(opt.s4_min)), Which::two);
    const cplx J2 = base.eta_diff;
    const double rotation = rotation_for(base);
    const double theta = rotation / 2;

    // Parallel condition: the same rotation kills Re e (eta0 - eta4).
    auto g = [&](double s4) {
        const auto d = pair(compute_periods(q0, pants_for(s4)), Which::three);
        return std::imag(std::conj(J2) * d.eta_diff) / (std::abs(J2) * std::abs(d.eta_diff));
    };
    const double lmin = std::log(opt.s4_min), lmax = std::log(s4_max);
    double prev_s = opt.s4_min, prev = g(prev_s);
    std::string why = "no radius s4 makes the segments parallel";
    for (int k = 1; k <= opt.s4_scan; ++k) {
        const double s = std::exp(lmin + (lmax - lmin) * k / opt.s4_scan);
        const double cur = g(s);
        if ((prev < 0) != (cur < 0)) {
            const double s4 = bracket_root(g, prev_s, s, 1e-14);
            const PantsData pants = pants_for(s4);
            const PeriodSet per = compute_periods(q0, pants);
            const cplx e = std::polar(1.0, theta);
            const auto d3 = pair(per, Which::three);
            if (std::real(e * d3.om_diff) > 0 && std::abs(std::real(e * d3.eta_diff)) < 1e-8) {
                QStarResult r;
                r.pants = pants;
                r.s2 = opt.s2;
                r.s3 = opt.s3;
                r.s4 = s4;
                r.rotation = rotation;
                r.qstar = q0.rotated(r.rotation);
                r.phi_star2 = critical_angle(q0, pants, Which::two);
                r.phi_star3 = critical_angle(q0, pants, Which::three);
                r.parallel_residual = std::abs(g(s4));
                const auto& w = per.local;
                const double psi2 = std::real(e * per.psi2), psi3 = std::real(e * per.psi3);
                const double rhs3 = 2 * std::real(e * (2.0 * w[2] - w[1] - w[3]));
                const double rhs4 = 2 * std::real(e * (w[3] + w[0] - 2.0 * w[4]));
                r.margin3 = rhs3 - psi2;
                r.margin4 = psi3 - rhs4;
                r.rate2 = -4 * rhs3 + 4 * psi2;
                r.rate3 = -4 * psi3 + 4 * rhs4;
                r.rate3_alt = -2 * psi3 + 4 * rhs4;
                if (r.margin3 > 0 && r.margin4 > 0) return r;
                why = "inequality margins are not positive at the matched radii; shrink epsilon";
            }
        }
        prev_s = s;
        prev = cur;
    }
    throw NumericError(why);
}

std::array<cplx, 4> phase_predictions(const AbelianHolonomy& hol) {
    auto ph = [&](int slot) { return std::polar(1.0, hol.orientation_signs[slot] * hol.h[slot]); };
    return {-ph(0), ph(2), -ph(1), ph(3)};
}

}  // namespace hitchin
