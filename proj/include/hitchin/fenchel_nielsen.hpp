#pragma once

#include <array>

#include "hitchin/hp.hpp"
#include "hitchin/numerics.hpp"

namespace hitchin {

struct ProjectivePair {
    hp::complex p, q;
    hp::complex ratio() const { return p / q; }
    // log|p/q| and arg(p/q) without forming the quotient in double.
    double log_abs_ratio() const { return hp::log_abs(p) - hp::log_abs(q); }
    double arg_ratio() const { return hp::arg(p / q); }
};

// Chordal distance on CP^1.
double projective_distance(const ProjectivePair& a, const ProjectivePair& b);

struct FNCoords {
    hp::complex l2, l3;
    ProjectivePair twist2, twist3;
    // Distance of each gluing matrix Q_i from the required shape (0 for a true representation).
    double shape_residual2 = 0, shape_residual3 = 0;
};

struct SimpsonScalars {
    hp::complex u2, u3, u4, w2, w3, w4;
};

// Boundary eigenvalues are c^{+-} = +-i.
SimpsonScalars simpson_scalars(const hp::complex& l1, const hp::complex& l2, const hp::complex& l3,
                               const hp::complex& l4);

// Generators at the three base points, in matrices acting on the fibre there.
struct PantsSystem {
    // at x2: xi2 * rho2 = xi1
    hp::Mat2 xi1, xi2, rho2;
    // at x3: rho2 carried along psi2 equals xi3 * rho3_x3
    hp::Mat2 xi3, rho3_x3;
    // at x4: xi4 * xi0 = rho3
    hp::Mat2 xi4, xi0, rho3;
    // transports x2 -> x3 and x3 -> x4
    hp::Mat2 psi2, psi3;

    // Largest relative defect among the relations above.
    double relation_residual() const;
    PantsSystem conjugated(const hp::Mat2& g) const;  // same representation in the frame g
};

// How the eigenlines of a boundary generator are found.
enum class EigenMode {
    computed,  // eigenvalues of xi itself, matched to +-i by proximity
    boundary,  // kernels of xi -+ i: the prescribed eigenvalues, exact for true representations
};

// h with h xi h^{-1} = diag(i, -i) and (h rho h^{-1})_{12} = 1, largest entry 1.
hp::Mat2 normalize_pants(const hp::Mat2& xi, const hp::Mat2& rho, EigenMode mode = EigenMode::computed);

hp::Mat2 standard_A();
hp::Mat2 standard_R(const hp::complex& u, const hp::complex& w, const hp::complex& l);
hp::Mat2 standard_U(const hp::complex& u);
// Square root of diag(i, -i); branch -1 is the negated root.
hp::Mat2 sqrt_A(int branch = 1);

enum class TwistReading {
    strict,  // require the [[p, q], [-q, p + l q]] shape
    row,     // p = Q11, q = Q12
    column,  // q = Q12, p = Q22 - l Q12
};

ProjectivePair twist_from_Q(const hp::Mat2& Q, const hp::complex& l, TwistReading mode = TwistReading::strict,
                            double tol = 1e-9, double* residual = nullptr);

struct ExtractOptions {
    int sqrt_branch = 1;
    TwistReading reading2 = TwistReading::strict;
    TwistReading reading3 = TwistReading::strict;
    double shape_tol = 1e-9;
    EigenMode eigen = EigenMode::computed;
};

struct GluingMatrices {
    hp::Mat2 h2, h3, h4, P2, P3, Q2, Q3;
};

GluingMatrices gluing_matrices(const PantsSystem& s, const hp::complex& l2, const hp::complex& l3, int sqrt_branch,
                               EigenMode mode = EigenMode::computed);
FNCoords extract_coords(const PantsSystem& s, const ExtractOptions& opt = {});
PantsSystem build_representation(const FNCoords& c, int sqrt_branch = 1);

}  // namespace hitchin
