#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "hitchin/hitchin_base.hpp"

namespace hitchin {

// Named pieces of the pants decomposition. Each contour is a ParamPath; the
// loops around punctures are recorded as chains of these pieces.
enum class Contour { sigma, eta, xi, psi2, psi3 };

struct ContourRef {
    Contour kind;
    int index = -1;       // puncture index for sigma, eta, xi
    int orientation = 1;  // +1 as defined, -1 reversed
};

struct PantsData {
    double epsilon = 0.05;
    double height = 0.3;  // height of the upper detour used by eta and psi paths
    cplx x2, x3, x4;
    double s2 = 0, s3 = 0, s4 = 0;
    PunctureConfig config;

    // Base points and paths for the Legendre layout. x4 solves
    // |int_{t4}^{x4} Z| = 2 |int_{x3}^{t2} Z| for a = 1, b = 0.
    static PantsData legendre(const PunctureConfig& cfg, double epsilon, double s2, double s3, double s4,
                              double height = 0.3);
    static double solve_x4(const PunctureConfig& cfg, double epsilon);

    double radius(int j) const;
    cplx base(int j) const;  // base point of eta_j
    void validate() const;

    ParamPath sigma(int j) const;  // t_j -> t_j + s_j
    ParamPath eta(int j) const;    // base(j) -> t_j + s_j through the upper half plane
    ParamPath xi(int j, int n = 256) const;
    ParamPath psi2() const;  // x2 -> x3
    ParamPath psi3() const;  // x3 -> x4
    ParamPath path(const ContourRef& c) const;
    // eta_i * xi_i * eta_i^{-1} followed by the same for the second puncture:
    // punctures (1, 2) for rho2 and (0, 4) for rho3.
    std::vector<ContourRef> rho2_chain() const;
    std::vector<ContourRef> rho3_chain() const;
    ParamPath chain_path(const std::vector<ContourRef>& chain) const;
};

// Up-polyline x -> x + iH -> y + iH -> y.
ParamPath upper_detour(cplx x, cplx y, double height);

struct PeriodSet {
    std::array<cplx, 5> pi{};
    std::array<cplx, 5> eta{};        // int over eta_j of Z_+
    std::array<cplx, 5> local{};      // -1/2 int over sigma_j of Z_+, approximately sqrt(tau_j s_j)
    std::array<cplx, 5> sqrt_tau{};   // branch of sqrt(tau_j) aligned with local
    cplx psi2, psi3;
};

// Periods of the unit-scale differential (the R of q is ignored).
PeriodSet compute_periods(const QuadraticDifferential& q, const PantsData& pants, const Tolerances& tol = {});

enum class LegendreDifference { p1_minus_p2, p0_minus_p4 };
cplx legendre_period_closed_form(double k, LegendreDifference which);

// Phases of exp(int B) on the basis cycles, in the order
// (eta2 - eta1, eta4 - eta0, psi2, psi3).
struct AbelianHolonomy {
    std::array<double, 4> h{};
    std::array<int, 4> orientation_signs{1, 1, 1, 1};

    static AbelianHolonomy make(std::array<double, 4> phases, std::array<int, 4> signs = {1, 1, 1, 1});
};

// A lifted path expressed as signed pants contours, each tagged with the
// sheet it is traversed on.
struct ChainStep {
    ContourRef contour;
    int sheet = 1;
};
using ContourChain = std::vector<ChainStep>;

// Attach sheets to a chain: crossing xi_j swaps sheets unless t_j is nodal.
ContourChain lift_chain(const std::vector<ContourRef>& chain, int start_sheet, const QuadraticDifferential& q);
// Match the samples of a path against pants contours, forward or reversed.
std::vector<ContourRef> decompose_path(const ParamPath& path, const PantsData& pants);

cplx abelian_integral(const ContourChain& chain, const AbelianHolonomy& hol);
cplx abelian_integral(const ParamPath& path, int start_sheet, const AbelianHolonomy& hol,
                      const QuadraticDifferential& q, const PantsData& pants);

}  // namespace hitchin
