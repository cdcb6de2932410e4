#include "hitchin/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

namespace hitchin {

ParamPath::ParamPath(std::vector<cplx> samples, bool singular_start, bool singular_end)
    : samples_(std::move(samples)), singular_start_(singular_start), singular_end_(singular_end) {
    validate();
    closed_ = samples_.size() > 2 && samples_.front() == samples_.back();
}

void ParamPath::validate() const {
    if (samples_.size() < 2) throw DomainError("path needs at least two samples");
    for (std::size_t i = 0; i + 1 < samples_.size(); ++i)
        if (samples_[i] == samples_[i + 1]) throw DomainError("path has repeated consecutive samples");
}

ParamPath ParamPath::segment(cplx from, cplx to, bool singular_start, bool singular_end) {
    return ParamPath({from, to}, singular_start, singular_end);
}

ParamPath ParamPath::circle(cplx center, double radius, int n, double phase0) {
    if (n < 3 || !(radius > 0)) throw DomainError("circle needs n >= 3 and radius > 0");
    std::vector<cplx> pts(n + 1);
    for (int i = 0; i < n; ++i) pts[i] = center + std::polar(radius, phase0 + 2 * kPi * i / n);
    pts[n] = pts[0];
    return ParamPath(std::move(pts));
}

static std::pair<std::size_t, double> locate(const ParamPath& p, double t) {
    double n = static_cast<double>(p.segments());
    t = std::clamp(t, 0.0, n);
    auto i = static_cast<std::size_t>(std::floor(t));
    if (i >= p.segments()) i = p.segments() - 1;
    return {i, t - static_cast<double>(i)};
}

cplx ParamPath::point(double t) const {
    auto [i, f] = locate(*this, t);
    return samples_[i] + (samples_[i + 1] - samples_[i]) * f;
}

cplx ParamPath::tangent(double t) const {
    auto [i, f] = locate(*this, t);
    (void)f;
    return samples_[i + 1] - samples_[i];
}

ParamPath ParamPath::reversed() const {
    std::vector<cplx> r(samples_.rbegin(), samples_.rend());
    return ParamPath(std::move(r), singular_end_, singular_start_);
}

ParamPath ParamPath::then(const ParamPath& next) const {
    if (std::abs(end() - next.start()) > 1e-12 * (1 + std::abs(end())))
        throw DomainError("concatenated paths do not meet");
    if (singular_end_ || next.singular_start_) throw DomainError("cannot concatenate through a singular endpoint");
    std::vector<cplx> s = samples_;
    s.insert(s.end(), next.samples_.begin() + 1, next.samples_.end());
    return ParamPath(std::move(s), singular_start_, next.singular_end_);
}

// ---- ScaledMatrix

ScaledMatrix ScaledMatrix::from(const Mat2& x) {
    ScaledMatrix s{x, 0.0};
    s.renormalize();
    return s;
}

ScaledMatrix& ScaledMatrix::renormalize() {
    double mx = max_abs(m);
    if (mx == 0.0 || !std::isfinite(mx)) return *this;
    m = m.scaled(cplx(1.0 / mx));
    log_scale += std::log(mx);
    return *this;
}

Mat2 ScaledMatrix::represented() const { return m.scaled(cplx(std::exp(log_scale))); }

ScaledMatrix ScaledMatrix::operator*(const ScaledMatrix& o) const {
    ScaledMatrix r{m * o.m, log_scale + o.log_scale};
    r.renormalize();
    return r;
}

ScaledMatrix ScaledMatrix::inverse() const {
    ScaledMatrix r{m.inverse(), -log_scale};
    r.renormalize();
    return r;
}

double ScaledMatrix::log_abs_det() const { return 2 * log_scale + std::log(std::abs(m.det())); }

double ScaledMatrix::det_phase() const { return std::arg(m.det()); }

ScaledMatrix ScaledMatrix::unit_determinant() const {
    ScaledMatrix r{m.scaled(1.0 / std::sqrt(m.det())), 0.0};
    r.renormalize();
    return r;
}

// ---- special functions

double bessel_k0(double x) {
    if (!(x > 0)) throw DomainError("bessel_k0 needs x > 0");
    if (x > 745) return 0.0;
    return std::cyl_bessel_k(0.0, x);
}

double bessel_k1(double x) {
    if (!(x > 0)) throw DomainError("bessel_k1 needs x > 0");
    if (x > 745) return 0.0;
    return std::cyl_bessel_k(1.0, x);
}

static void check_modulus(double k) {
    if (!(k > 0 && k < 1)) throw DomainError("elliptic modulus must lie in (0, 1)");
    if (k > 1 - 1e-9) throw NumericError("elliptic integral diverges as k -> 1");
}

double elliptic_k(double k) {
    check_modulus(k);
    return std::comp_ellint_1(k);
}

double elliptic_f(double x, double k) {
    check_modulus(k);
    if (!(x >= 0 && x <= 1)) throw DomainError("elliptic_f needs 0 <= x <= 1");
    if (x == 1.0) return std::comp_ellint_1(k);
    return std::ellint_1(k, std::asin(x));
}

// ---- quadrature

namespace {

constexpr unsigned kMaxDepth = 18;

cplx gk(const std::function<cplx(double)>& f, double lo, double hi, const Tolerances& tol, double& err) {
    using boost::math::quadrature::gauss_kronrod;
    double e = 0;
    double rel = std::min(1e-12, tol.quad_abs);
    cplx v = gauss_kronrod<double, 15>::integrate(f, lo, hi, kMaxDepth, rel, &e);
    err += e;
    return v;
}

void check(cplx v, double err, const Tolerances& tol, std::size_t pieces) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw ConvergenceError("quadrature produced a non-finite value", v, err);
    double allowed = std::max(tol.quad_abs * static_cast<double>(pieces), 1e-13 * std::abs(v));
    if (err > allowed)
        throw ConvergenceError("quadrature missed its tolerance", v, err);
}

}  // namespace

cplx integrate_contour(const ComplexIntegrand& f, const ParamPath& path, const Tolerances& tol) {
    const auto& s = path.samples();
    const std::size_t n = path.segments();
    cplx total = 0;
    double err = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cplx z0 = s[i], z1 = s[i + 1], dz = z1 - z0;
        bool sing0 = i == 0 && path.singular_start();
        bool sing1 = i + 1 == n && path.singular_end();
        if (sing0 && sing1) {
            cplx h = 0.5 * dz;
            total += gk([&](double u) { return f(z0 + h * (u * u)) * (2.0 * u) * h; }, 0.0, 1.0, tol, err);
            total -= gk([&](double u) { return f(z1 - h * (u * u)) * (2.0 * u) * (-h); }, 0.0, 1.0, tol, err);
        } else if (sing0) {
            total += gk([&](double u) { return f(z0 + dz * (u * u)) * (2.0 * u) * dz; }, 0.0, 1.0, tol, err);
        } else if (sing1) {
            total -= gk([&](double u) { return f(z1 - dz * (u * u)) * (2.0 * u) * (-dz); }, 0.0, 1.0, tol, err);
        } else {
            total += gk([&](double t) { return f(z0 + dz * t) * dz; }, 0.0, 1.0, tol, err);
        }
    }
    check(total, err, tol, n);
    return total;
}

cplx integrate_from_singular(const std::function<cplx(cplx)>& f_of_offset, cplx z0, cplx z1, const Tolerances& tol) {
    cplx dz = z1 - z0;
    double err = 0;
    cplx v = gk([&](double u) { return f_of_offset(dz * (u * u)) * (2.0 * u) * dz; }, 0.0, 1.0, tol, err);
    check(v, err, tol, 1);
    return v;
}

cplx integrate_interval(const std::function<cplx(double)>& f, double lo, double hi, const Tolerances& tol) {
    double err = 0;
    cplx v = gk(f, lo, hi, tol, err);
    check(v, err, tol, 1);
    return v;
}

// ---- linear transport ODE

namespace {

using State = std::array<double, 8>;

Mat2 unpack(const State& s) {
    return {{s[0], s[1]}, {s[2], s[3]}, {s[4], s[5]}, {s[6], s[7]}};
}

State pack(const Mat2& m) {
    return {m.a.real(), m.a.imag(), m.b.real(), m.b.imag(), m.c.real(), m.c.imag(), m.d.real(), m.d.imag()};
}

}  // namespace

ScaledMatrix transport_ode(const ConnectionForm& omega, double t0, double t1, const Tolerances& tol) {
    namespace odeint = boost::numeric::odeint;
    ScaledMatrix out;
    if (t0 == t1) return out;
    auto rhs = [&](const State& y, State& dy, double t) { dy = pack((omega(t) * unpack(y)).scaled(cplx(-1.0))); };
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(tol.ode_local, tol.ode_local);
    State y = pack(Mat2::identity());
    double t = t0;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double dt = dir * std::min(0.01, std::abs(t1 - t0));
    const double min_dt = 1e-14 * std::max(1.0, std::abs(t1 - t0));
    while (dir * (t1 - t) > 0) {
        if (dir * (t + dt - t1) > 0) dt = t1 - t;
        auto res = stepper.try_step(rhs, y, t, dt);
        if (res == odeint::fail) {
            if (std::abs(dt) < min_dt) throw NumericError("transport step size underflow");
            continue;
        }
        ScaledMatrix cur{unpack(y), 0.0};
        const double mx = max_abs(cur.m);
        if (mx > 1e50 || mx < 1e-50) {
            cur.renormalize();
            out.log_scale += cur.log_scale;
            y = pack(cur.m);
            stepper.reset();  // the stepper caches dy/dt at the last point
        }
    }
    out.m = unpack(y);
    out.renormalize();
    return out;
}

ScaledMatrix transport_ode(const ConnectionForm& omega, const ParamPath& path, const Tolerances& tol) {
    // Integrate one segment at a time so the step control never straddles a corner.
    ScaledMatrix acc;
    for (std::size_t i = 0; i < path.segments(); ++i)
        acc = transport_ode(omega, static_cast<double>(i), static_cast<double>(i + 1), tol) * acc;
    return acc;
}

// ---- roots

double bracket_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if (!(flo * fhi < 0)) throw DomainError("bracket_root: no sign change on the interval");
    std::uintmax_t iters = 500;
    auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
    return 0.5 * (a + b);
}

}  // namespace hitchin
