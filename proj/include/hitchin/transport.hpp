#pragma once

#include "hitchin/fenchel_nielsen.hpp"
#include "hitchin/fiducial.hpp"
#include "hitchin/hp.hpp"
#include "hitchin/periods.hpp"

namespace hitchin {

// Abelian model connection off the discs: diagonal in the eigenframe of Z,
// with exponent int (B + 2 sqrt(R) Re Z_+) along a path. Periods are computed
// once and reused for every R.
class ModelConnection {
public:
    static ModelConnection make(const QuadraticDifferential& q, double R, const AbelianHolonomy& hol,
                                const PantsData& pants, const Tolerances& tol = {});
    ModelConnection at_R(double R) const;
    ModelConnection with_holonomy(const AbelianHolonomy& hol) const;

    const QuadraticDifferential& q() const { return q_; }
    double R() const { return R_; }
    const AbelianHolonomy& holonomy() const { return hol_; }
    const PantsData& pants() const { return pants_; }
    const PeriodSet& periods() const { return periods_; }
    const Tolerances& tolerances() const { return tol_; }

private:
    QuadraticDifferential q_;
    double R_ = 1;
    AbelianHolonomy hol_;
    PantsData pants_;
    PeriodSet periods_;
    Tolerances tol_;
};

// Integral of Z_+ (sheet +1, unit scale) over a pants contour as defined.
cplx contour_period(const PeriodSet& p, const ContourRef& c);

// Exponent x of the transport diag(e^x, e^{-x}) along one pants contour on
// the given sheet. Circles are not diagonal and are rejected.
hp::complex contour_exponent(const ModelConnection& conn, const ContourRef& c, int sheet = 1);

// Transport along a path avoiding the discs. The path is split where it
// crosses a cut; each crossing swaps the sheets and contributes the
// transposition. Paths that are chains of pants contours use the stored
// periods; other paths are integrated directly and need zero holonomy.
hp::Mat2 diagonal_transport_hp(const ModelConnection& conn, const ParamPath& path, int start_sheet = 1,
                               int* end_sheet = nullptr);
ScaledMatrix diagonal_transport(const ModelConnection& conn, const ParamPath& path, int start_sheet = 1);

// Number of cut crossings along the path (transpositions in its transport).
int cut_crossings(const QuadraticDifferential& q, const ParamPath& path);

// Circle monodromy at t_j seen from the base point of eta_j:
// T(eta_j)^{-1} RH[xi_j] T(eta_j).
hp::Mat2 lasso_monodromy(const ModelConnection& conn, int j);
hp::Mat2 rh_xi_hp(const LocalRhParams& p);

enum class Loop { zeta2, zeta3 };

hp::Mat2 loop_monodromy_hp(const ModelConnection& conn, Loop which);
ScaledMatrix loop_monodromy(const ModelConnection& conn, Loop which);
hp::complex length_coordinate(const ModelConnection& conn, Loop which);

// Generators of the pants system at the three base points. xi3_sign = -1
// uses the inverse circle around t3.
PantsSystem model_pants_system(const ModelConnection& conn, int xi3_sign = 1);

// Fenchel-Nielsen coordinates of the model representation. Twists are read
// off the first row of Q2 and the second column of Q3, with the shape
// residuals reported rather than enforced. Eigenlines of the boundary
// generators are taken for the prescribed eigenvalues +-i.
FNCoords model_coordinates(const ModelConnection& conn, int xi3_sign = 1);

ScaledMatrix to_scaled(const hp::Mat2& m);

}  // namespace hitchin
