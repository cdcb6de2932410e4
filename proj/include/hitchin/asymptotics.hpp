#pragma once

#include <array>
#include <string>
#include <vector>

#include "hitchin/transport.hpp"

namespace hitchin {

// A complex number stored as log|z| and arg z.
struct LogForm {
    double log_abs = 0;
    double phase = 0;
    static LogForm of(const hp::complex& z);
    hp::complex value() const;
};

enum class Which { two = 2, three = 3 };

struct LengthPrediction {
    LogForm value;
    hp::complex exact;      // -2 cosh(c) in extended precision
    hp::complex argument;   // c = 2 int B + 4 sqrt(R) Re(pi difference)
    bool degenerate = false;  // Re of the period difference vanishes; no value predicted
};

// -2 cosh(2 int_{eta2 - eta1} B + 4 sqrt(R) Re(pi2 - pi1)) for l2, and the
// eta4 - eta0, pi4 - pi0 analogue for l3.
LengthPrediction predict_l(const ModelConnection& conn, Which which);
LengthPrediction predict_l(const QuadraticDifferential& q, const PantsData& pants, const AbelianHolonomy& hol,
                           double R, Which which);

struct Inequality {
    std::string name;
    double lhs = 0, rhs = 0;
    bool holds = false;  // lhs < rhs
    bool tie = false;    // |lhs - rhs| within tolerance
};

enum class Limit { one_zero, zero_one };

struct TwistCaseReport {
    Which which = Which::two;
    int case_id = 0;        // 1..8 in the order of the twist proof
    bool mirrored = false;  // classified after replacing Z_+ by -Z_+
    std::vector<Inequality> inequalities;
    Limit limit = Limit::one_zero;
    // log|p/q| ~ rate * sqrt(R) (plus bounded terms).
    double rate = 0;
    // Second rate expression where the statement and its derivation differ
    // (the psi3 coefficient for the third twist); equal to rate otherwise.
    double rate_alt = 0;
    bool tie = false;  // some governing inequality is within tolerance of equality
};

TwistCaseReport predict_twist(const ModelConnection& conn, Which which, double tie_tol = 1e-9);
TwistCaseReport predict_twist(const QuadraticDifferential& q, const PantsData& pants, const AbelianHolonomy& hol,
                              Which which, double tie_tol = 1e-9);

enum class AngleMode {
    match,    // Re(pi_i - pi_j) equals the local-period side: Re e (eta_i - eta_j) = 0
    bounded,  // Re(pi_i - pi_j) = 0
};

// phi in [0, 2 pi) with the condition met by q rotated by phi; pairs (1, 2)
// for which = 2 and (0, 4) for which = 3.
double critical_angle(const QuadraticDifferential& q, const PantsData& pants, Which which,
                      AngleMode mode = AngleMode::match, int scan = 64);
double angle_residual(const QuadraticDifferential& q, const PantsData& pants, Which which, AngleMode mode,
                      double phi);
// Point of the Hopf fibre through q selected by the critical angle.
QuadraticDifferential section_point(const QuadraticDifferential& q, const PantsData& pants, Which which,
                                    AngleMode mode = AngleMode::match);

// Rotation in [0, 4 pi) of the Hopf fibre through q0 with Re e(eta1 - eta2) = 0
// and Re e(omega1 - omega2) > 0, e = e^{i rotation / 2}. The root of q0 is
// turned continuously, so the full range distinguishes the two sheets.
double section_rotation(const QuadraticDifferential& q0, const PantsData& pants);

struct QStarOptions {
    double s2 = 0.004;
    double s3 = 0.02;
    double height = 0.3;
    double s4_min = 1e-4;
    int s4_scan = 64;
};

struct QStarResult {
    QuadraticDifferential qstar;
    PantsData pants;
    double s2 = 0, s3 = 0, s4 = 0;
    double phi_star2 = 0, phi_star3 = 0;  // critical angles at the unrotated point, mod 2 pi
    double rotation = 0;                  // qstar = q0.rotated(rotation), rotation in [0, 4 pi)
    double parallel_residual = 0;
    double margin3 = 0;  // rhs - lhs of the psi2 inequality, positive when it holds
    double margin4 = 0;  // lhs - rhs of the psi3 inequality, positive when it holds
    double rate2 = 0, rate3 = 0, rate3_alt = 0;
};

QStarResult find_qstar(const PunctureConfig& config, double epsilon, const QStarOptions& opt = {});

// Phases of the coordinates cutting out the four divisor components near the
// corner: (-e^{i h1}, e^{i h3}, -e^{i h2}, e^{i h4}), signs applied.
std::array<cplx, 4> phase_predictions(const AbelianHolonomy& hol);

}  // namespace hitchin
