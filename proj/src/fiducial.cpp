#include "hitchin/fiducial.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

namespace hitchin {

namespace {

double power_of(FiducialKind k) { return k == FiducialKind::logarithmic ? 1.0 : 3.0; }

// rho = lambda r.
double rho_scale(FiducialKind k, double R) { return k == FiducialKind::logarithmic ? R : std::cbrt(R); }

// Bessel argument (8/p) rho^{p/2}.
double bessel_arg(double p, double rho) { return 8.0 / p * std::pow(rho, p / 2); }

struct Hermite {
    double h, t;
    double h00() const { return (1 + 2 * t) * (1 - t) * (1 - t); }
    double h10() const { return t * (1 - t) * (1 - t); }
    double h01() const { return t * t * (3 - 2 * t); }
    double h11() const { return t * t * (t - 1); }
};

}  // namespace

double FiducialSolution::forcing(double rr, double y) const {
    const double p = power_of(kind);
    return 8 * std::pow(rho_scale(kind, R) * rr, p) * std::sinh(2 * y);
}

static std::pair<std::size_t, Hermite> bracket(const FiducialSolution& s, double rr) {
    if (!(rr >= s.r_min() * (1 - 1e-12) && rr <= s.r_max() * (1 + 1e-12)))
        throw DomainError("radius outside the fiducial grid");
    auto it = std::upper_bound(s.r.begin(), s.r.end(), rr);
    std::size_t i = it == s.r.begin() ? 0 : static_cast<std::size_t>(it - s.r.begin()) - 1;
    if (i + 1 >= s.r.size()) i = s.r.size() - 2;
    double x0 = std::log(s.r[i]), x1 = std::log(s.r[i + 1]);
    double t = std::clamp((std::log(rr) - x0) / (x1 - x0), 0.0, 1.0);
    return {i, Hermite{x1 - x0, t}};
}

double FiducialSolution::value(double rr) const {
    auto [i, H] = bracket(*this, rr);
    double p0 = r[i] * dm[i], p1 = r[i + 1] * dm[i + 1];
    return H.h00() * m[i] + H.h10() * H.h * p0 + H.h01() * m[i + 1] + H.h11() * H.h * p1;
}

double FiducialSolution::r_derivative(double rr) const {
    auto [i, H] = bracket(*this, rr);
    double p0 = r[i] * dm[i], p1 = r[i + 1] * dm[i + 1];
    double f0 = forcing(r[i], m[i]), f1 = forcing(r[i + 1], m[i + 1]);
    return H.h00() * p0 + H.h10() * H.h * f0 + H.h01() * p1 + H.h11() * H.h * f1;
}

double FiducialSolution::derivative(double rr) const { return r_derivative(rr) / rr; }

FiducialSolution solve_fiducial(FiducialKind kind, double R, double r_max, int n_grid, double r_min) {
    namespace odeint = boost::numeric::odeint;
    if (!(R > 0)) throw DomainError("R must be positive");
    if (n_grid < 16) throw DomainError("fiducial grid needs at least 16 points");
    const double p = power_of(kind);
    const double lambda = rho_scale(kind, R);
    if (r_max <= 0) {
        // Bessel argument 36 at the outer edge.
        const double rho = std::pow(36.0 * p / 8.0, 2.0 / p);
        r_max = rho / lambda;
    }
    if (!(r_min > 0 && r_min < r_max)) throw DomainError("need 0 < r_min < r_max");

    const double x_lo = std::log(lambda * r_min), x_hi = std::log(lambda * r_max);
    std::vector<double> xs(n_grid);
    for (int i = 0; i < n_grid; ++i) xs[i] = x_hi + (x_lo - x_hi) * i / (n_grid - 1);

    using State = std::array<double, 2>;
    auto rhs = [p](const State& y, State& dy, double x) {
        dy[0] = y[1];
        dy[1] = 8 * std::exp(p * x) * std::sinh(2 * y[0]);
    };
    const double s = bessel_arg(p, std::exp(x_hi));
    State y{bessel_k0(s) / kPi, -bessel_k1(s) / kPi * (p * s / 2)};

    FiducialSolution sol;
    sol.kind = kind;
    sol.R = R;
    sol.r.resize(n_grid);
    sol.m.resize(n_grid);
    sol.dm.resize(n_grid);
    int idx = n_grid - 1;
    auto observe = [&](const State& st, double x) {
        if (idx < 0) return;
        double rr = std::exp(x) / lambda;
        sol.r[idx] = rr;
        sol.m[idx] = st[0];
        sol.dm[idx] = st[1] / rr;
        --idx;
    };
    auto stepper = odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_fehlberg78<State>());
    odeint::integrate_times(stepper, rhs, y, xs.begin(), xs.end(), -1e-3, observe);
    for (int i = 0; i < n_grid; ++i)
        if (!std::isfinite(sol.m[i]) || !std::isfinite(sol.dm[i]))
            throw NumericError("fiducial shooting produced non-finite values");
    // Exact grid ends.
    sol.r.front() = r_min;
    sol.r.back() = r_max;
    return sol;
}

FiducialDiagnostics diagnose(const FiducialSolution& sol) {
    FiducialDiagnostics d;
    const std::size_t n = sol.r.size();
    const double p = power_of(sol.kind);
    const double lambda = rho_scale(sol.kind, sol.R);
    static constexpr std::array<double, 9> c{1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0,
                                             4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};
    const double h = std::log(sol.r[1] / sol.r[0]);
    std::vector<double> P(n), F(n);
    for (std::size_t i = 0; i < n; ++i) {
        P[i] = sol.r[i] * sol.dm[i];
        F[i] = sol.forcing(sol.r[i], sol.m[i]);
    }
    // First-order form m_x = P, P_x = F in x = log r, each equation scaled by
    // the size of its own terms.
    for (std::size_t i = 4; i + 4 < n; ++i) {
        double dm = 0, dp = 0;
        for (int k = -4; k <= 4; ++k) {
            dm += c[k + 4] * sol.m[i + k];
            dp += c[k + 4] * P[i + k];
        }
        dm /= h;
        dp /= h;
        double r1 = std::abs(dm - P[i]) / std::abs(P[i]);
        double r2 = std::abs(dp - F[i]) / (std::abs(F[i]) + std::abs(P[i]));
        d.max_residual = std::max({d.max_residual, r1, r2});
    }

    int n_large = 0, n_small = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = lambda * sol.r[i];
        const double s = bessel_arg(p, rho);
        if (s >= 30) {
            // Leading Bessel asymptotics: (1/pi) K0(s) ~ e^{-s} / (2 pi sqrt2 rho^{1/4})
            // for p = 1, with an extra 1/sqrt3 and rho^{3/4} for p = 3.
            double lead = std::exp(-s) / (2 * kPi * std::sqrt(2.0) * std::pow(rho, p / 4));
            if (p == 3) lead *= std::sqrt(3.0);
            double ratio = sol.m[i] / lead;
            d.large_ratio_error = std::max(d.large_ratio_error, std::abs(ratio - 1));
            d.large_ratio_mean += ratio;
            ++n_large;
        }
        if (sol.r[i] <= 10 * sol.r[0]) {
            double ref = sol.kind == FiducialKind::logarithmic ? std::log(sol.r[i]) : -0.5 * std::log(sol.r[i]);
            double ratio = sol.m[i] / ref;
            d.small_ratio_error = std::max(d.small_ratio_error, std::abs(ratio - 1));
            d.small_ratio_mean += ratio;
            ++n_small;
        }
    }
    if (n_large) d.large_ratio_mean /= n_large;
    if (n_small) d.small_ratio_mean /= n_small;
    d.inner_log_slope = P[0];
    d.positive_decreasing = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(sol.m[i] > 0)) d.positive_decreasing = false;
        if (i + 1 < n && !(sol.m[i + 1] < sol.m[i])) d.positive_decreasing = false;
    }
    return d;
}

UniversalProfile::UniversalProfile(int n_grid)
    : sol_(solve_fiducial(FiducialKind::logarithmic, 1.0, std::pow(45.0 / 8.0, 2), n_grid, 1e-14)) {}

double UniversalProfile::log_derivative(double rho) const {
    if (!(rho > 0)) throw DomainError("rho must be positive");
    if (rho >= sol_.r_max()) {
        double s = 8 * std::sqrt(rho);
        return -(4 / kPi) * std::sqrt(rho) * bessel_k1(s);
    }
    if (rho <= sol_.r_min()) return sol_.r_derivative(sol_.r_min());
    return sol_.r_derivative(rho);
}

double UniversalProfile::value(double rho) const {
    if (!(rho > 0)) throw DomainError("rho must be positive");
    if (rho >= sol_.r_max()) return bessel_k0(8 * std::sqrt(rho)) / kPi;
    if (rho <= sol_.r_min()) {
        double r0 = sol_.r_min();
        return sol_.value(r0) + sol_.r_derivative(r0) * std::log(rho / r0);
    }
    return sol_.value(rho);
}

const UniversalProfile& universal_profile() {
    static const UniversalProfile p;
    return p;
}

double f_function(const FiducialSolution& sol, double rr) {
    if (sol.kind != FiducialKind::logarithmic) throw DomainError("f_function needs the logarithmic profile");
    return -0.125 + 0.25 * sol.r_derivative(rr);
}

Mat2 circle_connection_form(const FiducialSolution& sol, double R, double r_j, double phi) {
    if (std::abs(sol.R - R) > 1e-12 * R) throw DomainError("profile was solved for a different R");
    const cplx I{0, 1};
    const double half = -0.5 * sol.r_derivative(r_j);
    const cplx rot = 2.0 * I * std::sqrt(R * r_j) * std::sin(phi / 2);
    return {I * (0.75 + rot), I * half, I * half, I * (0.75 - rot)};
}

IntegratedForm integral_connection_form(double R, double r_j, double r_dm, double arg_tau) {
    const cplx I{0, 1};
    double c = std::cos(arg_tau / 2);
    if (std::abs(c) < 1e-12) c = 0;  // Re sqrt(tau) = 0: the rotation part integrates to zero
    return {1.5 * kPi * I, -I * kPi * r_dm, cplx(8 * c * std::sqrt(R * r_j))};
}

ScaledMatrix rh_xi(double R, const QuadraticDifferential& q, int j, const PantsData& pants,
                   const UniversalProfile& profile) {
    if (j < 0 || j > 4) throw DomainError("puncture index out of range");
    const auto t = ramification_point(q);
    if (!t.at_infinity() && std::abs(t.value() - pants.config.t[j]) <= pants.radius(j))
        throw DomainError("ramification point inside the disc of xi_j");
    const cplx tau = residues(q)[j];
    const double r_j = std::abs(tau) * pants.radius(j);
    const auto f = integral_connection_form(R, r_j, profile.log_derivative(R * r_j), std::arg(tau));
    return ScaledMatrix::from(swap_matrix() * expm_neg_symmetric(f.A, f.B, f.C));
}

LocalRhParams rh_xi_params(double R, cplx omega, bool nodal, const UniversalProfile& profile) {
    const cplx I{0, 1};
    LocalRhParams p;
    p.nodal = nodal;
    p.A = 1.5 * kPi * I;
    p.C = 8 * std::sqrt(R) * omega.real();
    p.B = nodal ? cplx(0) : -I * kPi * profile.log_derivative(R * std::norm(omega));
    return p;
}

Mat2T<cplx> rh_xi_matrix(const LocalRhParams& p) {
    const cplx I{0, 1};
    if (p.nodal) return {0.0, I * std::exp(-p.C), I * std::exp(p.C), 0.0};
    return swap_matrix() * expm_neg_symmetric(p.A, p.B, p.C);
}

Mat2 diagonalizing_frame(double m, double phi) {
    const double n = std::sqrt(std::exp(2 * m) + 1);
    const cplx e = std::polar(1.0, -phi / 2);
    return {std::exp(m) / n, std::exp(m) / n, e / n, -e / n};
}

Mat2 apparent_frame(double l, double phi) {
    const double n = std::sqrt(std::exp(2 * l) + 1);
    const cplx e = std::polar(1.0, phi / 2);
    return {std::exp(l) / n, std::exp(l) / n, e / n, -e / n};
}

Mat2 fiducial_higgs(double R, double r, double m, double phi) {
    const double k = std::sqrt(R) / std::sqrt(r);
    return {0.0, k * std::exp(m), k * std::polar(std::exp(-m), -phi), 0.0};
}

Mat2 apparent_higgs(double R, double r, double l, double phi) {
    const double k = std::sqrt(R) * std::sqrt(r);
    return {0.0, k * std::exp(l), k * std::polar(std::exp(-l), phi), 0.0};
}

double fiducial_inner_product(double m) { return std::tanh(m); }

}  // namespace hitchin
