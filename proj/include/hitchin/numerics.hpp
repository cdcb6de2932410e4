#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hitchin/matrix2.hpp"

namespace hitchin {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when adaptive quadrature misses its tolerance; carries the best guess.
class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, cplx best, double bound)
        : NumericError(what), best_estimate(best), error_bound(bound) {}
    cplx best_estimate;
    double error_bound;
};

struct Tolerances {
    double quad_abs = 1e-10;
    double ode_local = 1e-10;
};

// Polyline in the z-chart, parameterized by t in [0, segments()], with unit
// parameter length per segment.
class ParamPath {
public:
    ParamPath() = default;
    explicit ParamPath(std::vector<cplx> samples, bool singular_start = false,
                       bool singular_end = false);

    static ParamPath segment(cplx from, cplx to, bool singular_start = false,
                             bool singular_end = false);
    // Closed polygon with n vertices on the circle, first vertex at angle phase0.
    static ParamPath circle(cplx center, double radius, int n = 256, double phase0 = 0.0);

    const std::vector<cplx>& samples() const { return samples_; }
    std::size_t segments() const { return samples_.size() - 1; }
    bool closed() const { return closed_; }
    bool singular_start() const { return singular_start_; }
    bool singular_end() const { return singular_end_; }
    cplx start() const { return samples_.front(); }
    cplx end() const { return samples_.back(); }

    cplx point(double t) const;
    cplx tangent(double t) const;  // dz/dt on the segment containing t

    ParamPath reversed() const;
    ParamPath then(const ParamPath& next) const;  // concatenation, endpoints must agree

private:
    void validate() const;
    std::vector<cplx> samples_;
    bool singular_start_ = false;
    bool singular_end_ = false;
    bool closed_ = false;
};

// 2x2 matrix with a factored real scale: represented value e^{log_scale} * m.
struct ScaledMatrix {
    Mat2 m = Mat2::identity();
    double log_scale = 0.0;

    static ScaledMatrix from(const Mat2& x);
    ScaledMatrix& renormalize();
    Mat2 represented() const;  // may overflow; for moderate scales only
    ScaledMatrix operator*(const ScaledMatrix& o) const;
    ScaledMatrix inverse() const;
    // log|det| of the represented matrix and its phase.
    double log_abs_det() const;
    double det_phase() const;
    // Rescale so the represented determinant is 1 (up to the choice of root).
    ScaledMatrix unit_determinant() const;
    cplx trace_normalized() const { return m.trace(); }
};

double bessel_k0(double x);
double bessel_k1(double x);

double elliptic_k(double k);
double elliptic_f(double x, double k);

using ComplexIntegrand = std::function<cplx(cplx)>;

// Adaptive Gauss-Kronrod over each segment. A 1/sqrt singularity flagged at an
// endpoint is removed by z = endpoint + (z_other - endpoint) u^2.
cplx integrate_contour(const ComplexIntegrand& f, const ParamPath& path, const Tolerances& tol = {});

// Integrand given as a function of the offset d = z - z0 from a singular start
// z0, with z = z0 + d along the straight segment to z1. Used where the
// integrand loses precision when the offset is recovered from z.
cplx integrate_from_singular(const std::function<cplx(cplx)>& f_of_offset, cplx z0, cplx z1,
                             const Tolerances& tol = {});

// Real-line adaptive quadrature helper with the same error policy.
cplx integrate_interval(const std::function<cplx(double)>& f, double lo, double hi,
                        const Tolerances& tol = {});

// exp(-[[A - C, B], [B, A + C]]) in closed form, for any complex scalar type
// with exp, sqrt and abs reachable by argument-dependent lookup.
template <class T>
Mat2T<T> expm_neg_symmetric_t(const T& A, const T& B, const T& C) {
    using std::abs;
    using std::exp;
    using std::sqrt;
    const T D = sqrt(B * B + C * C);
    const T eA = exp(-A);
    if (abs(D) < 1e-4) {
        // cosh D and sinh(D)/D by their even series.
        const T D2 = D * D;
        const T ch = T(1) + D2 / T(2) * (T(1) + D2 / T(12) * (T(1) + D2 / T(30) * (T(1) + D2 / T(56))));
        const T sc = T(1) + D2 / T(6) * (T(1) + D2 / T(20) * (T(1) + D2 / T(42) * (T(1) + D2 / T(72))));
        const T off = -eA * B * sc;
        return {eA * (ch + C * sc), off, off, eA * (ch - C * sc)};
    }
    // (D + C)(D - C) = B^2: form the larger factor directly, the other by division.
    T dpc, dmc;
    if (abs(D + C) >= abs(D - C)) {
        dpc = D + C;
        dmc = B * B / dpc;
    } else {
        dmc = D - C;
        dpc = B * B / dmc;
    }
    const T ep = exp(D), em = exp(-D);
    const T f = eA / (T(2) * D);
    const T off = -eA * B * (ep - em) / (T(2) * D);
    return {f * (dmc * em + dpc * ep), off, off, f * (dpc * em + dmc * ep)};
}

inline Mat2 expm_neg_symmetric(cplx A, cplx B, cplx C) { return expm_neg_symmetric_t<cplx>(A, B, C); }

// Fundamental solution of dY/dt = -Omega(t) Y on [t0, t1], Y(t0) = I.
using ConnectionForm = std::function<Mat2(double)>;
ScaledMatrix transport_ode(const ConnectionForm& omega, double t0, double t1, const Tolerances& tol = {});
// Same, with the parameter domain taken from a path: [0, path.segments()].
ScaledMatrix transport_ode(const ConnectionForm& omega, const ParamPath& path, const Tolerances& tol = {});

// Bracketing root finder (TOMS 748, i.e. bisection with secant/inverse cubic steps).
double bracket_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13);

}  // namespace hitchin
