#pragma once

#include <vector>

#include "hitchin/periods.hpp"

namespace hitchin {

// logarithmic: (d^2/dr^2 + r^{-1} d/dr) m = 8 R r^{-1} sinh 2m
// ramification: same with r^{+1}
enum class FiducialKind { logarithmic, ramification };

// Both equations are scale free: with rho = R r (resp. R^{1/3} r) and
// x = log rho the profile solves y_xx = 8 e^{p x} sinh 2y, p = 1 (resp. 3).
struct FiducialSolution {
    FiducialKind kind = FiducialKind::logarithmic;
    double R = 1;
    std::vector<double> r;   // log-spaced, increasing
    std::vector<double> m;   // profile value
    std::vector<double> dm;  // d m / d r

    double r_min() const { return r.front(); }
    double r_max() const { return r.back(); }
    double value(double rr) const;
    double derivative(double rr) const;
    double r_derivative(double rr) const;  // r dm/dr, the log-derivative
    // Right side of y_xx = ... at radius rr for the profile value y.
    double forcing(double rr, double y) const;
};

// r_max <= 0 picks the radius where the Bessel argument equals 36.
FiducialSolution solve_fiducial(FiducialKind kind, double R, double r_max = 0, int n_grid = 400, double r_min = 1e-8);

struct FiducialDiagnostics {
    double max_residual = 0;        // relative, over nodes with a full stencil
    double large_ratio_error = 0;   // max |m 2 pi sqrt2 rho^{1/4} e^{8 sqrt rho} - 1| where 8 sqrt rho >= 30
    double large_ratio_mean = 0;
    double small_ratio_error = 0;   // max |m / log r - 1| (logarithmic) on the innermost decade
    double small_ratio_mean = 0;
    double inner_log_slope = 0;     // r dm/dr at r_min
    bool positive_decreasing = false;
};

FiducialDiagnostics diagnose(const FiducialSolution& sol);

// r dm/dr as a function of rho = R r for the logarithmic kind, valid for
// every rho > 0: inner values are extended at constant slope, outer values
// use the Bessel tail.
class UniversalProfile {
public:
    explicit UniversalProfile(int n_grid = 6000);
    double log_derivative(double rho) const;
    double value(double rho) const;
    const FiducialSolution& solution() const { return sol_; }

private:
    FiducialSolution sol_;  // computed at R = 1
};

const UniversalProfile& universal_profile();

double f_function(const FiducialSolution& sol, double rr);

// Coefficient of d(phi) in the connection form along the circle r = r_j.
Mat2 circle_connection_form(const FiducialSolution& sol, double R, double r_j, double phi);
// Integral of the form over [arg_tau, arg_tau + 2 pi]: -[[A - C, B], [B, A + C]] coefficients.
struct IntegratedForm {
    cplx A, B, C;
};
IntegratedForm integral_connection_form(double R, double r_j, double r_dm, double arg_tau);

// T * exp(-integral) with the residue-based radius r_j = |tau_j| s_j.
ScaledMatrix rh_xi(double R, const QuadraticDifferential& q, int j, const PantsData& pants,
                   const UniversalProfile& profile = universal_profile());

// Same monodromy parameterized by the exact local period omega = -1/2 int_sigma Z:
// C = 8 sqrt(R) Re omega and radius |omega|^2. The nodal case (Z regular at
// t_j) gives the pure transposition-type matrix.
struct LocalRhParams {
    cplx A, B, C;
    bool nodal = false;
};
LocalRhParams rh_xi_params(double R, cplx omega, bool nodal, const UniversalProfile& profile = universal_profile());
Mat2T<cplx> rh_xi_matrix(const LocalRhParams& p);

// Unit diagonalizing frames on the circle, as columns of a matrix.
Mat2 diagonalizing_frame(double m, double phi);
Mat2 apparent_frame(double l, double phi);
Mat2 fiducial_higgs(double R, double r, double m, double phi);
Mat2 apparent_higgs(double R, double r, double l, double phi);
double fiducial_inner_product(double m);

}  // namespace hitchin
