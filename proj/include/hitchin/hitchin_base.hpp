#pragma once

#include <array>
#include <optional>

#include "hitchin/numerics.hpp"

namespace hitchin {

struct PunctureConfig {
    double k = 0.5;
    std::array<cplx, 5> t{};

    // t = (-1/k, 0, 1, -1, 1/k).
    static PunctureConfig legendre(double k);
    void validate() const;
};

// Unit-scale differential (a z - b) dz^2 / prod(z - t_j), scaled by R.
struct QuadraticDifferential {
    cplx a{1.0};
    cplx b{0.0};
    double R = 1.0;
    PunctureConfig config = PunctureConfig::legendre(0.5);
    // Square root of a (of -b when a = 0). Carried explicitly so a Hopf
    // rotation by phi turns it continuously by phi/2.
    cplx root{1.0};

    static QuadraticDifferential make(cplx a, cplx b, double R = 1.0,
                                      const PunctureConfig& cfg = PunctureConfig::legendre(0.5));
    QuadraticDifferential rotated(double phi) const;
    QuadraticDifferential with_R(double r) const;
    double norm() const { return std::sqrt(std::norm(a) + std::norm(b)); }
    // Index j with t(q) = t_j, if any.
    std::optional<int> nodal_index() const;
};

struct HopfCoords {
    double theta = 0;   // [0, pi/2]
    double varphi = 0;  // [0, 2 pi)
    double phi = 0;     // [0, pi)
};

HopfCoords hopf_coords(cplx a, cplx b);
std::pair<cplx, cplx> from_hopf(const HopfCoords& h);

struct SheetedPoint {
    cplx z;
    int sheet = 1;
};

// Projective point [num : den]; den == 0 is the point at infinity.
struct ProjectivePoint {
    cplx num, den;
    bool at_infinity() const { return den == cplx(0.0); }
    cplx value() const { return num / den; }
};

cplx eval_Q(const QuadraticDifferential& q, cplx z);
ProjectivePoint ramification_point(const QuadraticDifferential& q);

// Residues of the unit differential (R factored out).
std::array<cplx, 5> residues(const QuadraticDifferential& q);
// max |tau_j| over the unit sphere of (a, b); attained, so this is exact.
double tau_bound(const PunctureConfig& cfg);

// Principal square root rotated so its cut is the downward vertical ray.
cplx sqrt_down(cplx w);

// Coefficient of Z_sheet at z. Single-valued on the plane minus downward
// vertical cuts from every branch point; the real axis belongs to the upper
// side of each cut.
cplx sqrt_z(const QuadraticDifferential& q, const SheetedPoint& p);
// Same at z = t_j + d, with d passed exactly (for quadrature near t_j).
cplx sqrt_z_offset(const QuadraticDifferential& q, int j, cplx d, int sheet = 1);

// Branch points of Z with multiplicity (nodal coincidence counted twice).
std::vector<std::pair<cplx, int>> branch_points(const QuadraticDifferential& q);

double winding_number(const ParamPath& loop, cplx p);
int sheet_parity(const ParamPath& loop, const QuadraticDifferential& q);

}  // namespace hitchin
