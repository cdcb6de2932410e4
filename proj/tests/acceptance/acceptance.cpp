// Acceptance harness: one PASS/FAIL line per criterion.
//   acceptance            run all criteria, exit 1 if any fails
//   acceptance --only N   run criterion N only

#include <Eigen/Core>
#include <unsupported/Eigen/MatrixFunctions>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "hitchin/asymptotics.hpp"

using namespace hitchin;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> default_grid() { return cli::RGrid{}.values(); }

// Indices of the top decade of the grid.
std::vector<std::size_t> top_decade(const std::vector<double>& grid) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] >= grid.back() / 10 * (1 - 1e-12)) idx.push_back(i);
    return idx;
}

const QStarResult& qstar() {
    static const auto r = find_qstar(PunctureConfig::legendre(0.5), 0.05);
    return r;
}

Outcome c1_periods() {
    double worst = 0;
    for (double k : {0.3, 0.5, 0.7}) {
        const auto pc = PunctureConfig::legendre(k);
        const auto pants = PantsData::legendre(pc, 0.05, 0.004, 0.02, 0.03);
        const auto p = compute_periods(QuadraticDifferential::make(1.0, 0.0, 1.0, pc), pants);
        const double ref = -k * elliptic_k(k);
        worst = std::max({worst, std::abs(p.pi[1] - p.pi[2] - ref), std::abs(p.pi[0] - p.pi[4] - 2 * ref)});
    }
    return {worst <= 1e-8, fmt("max abs error %.3e over k in {0.3, 0.5, 0.7} (bound 1e-8)", worst)};
}

Outcome c2_expm() {
    std::mt19937 g(20240601);
    std::uniform_real_distribution<double> u(-3, 3);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const cplx A(u(g), u(g)), B(u(g), u(g)), C(u(g), u(g));
        Eigen::Matrix2cd M;
        M << A - C, B, B, A + C;
        const Eigen::Matrix2cd E = (-M).exp();  // Pade scaling and squaring
        const Mat2 ref{E(0, 0), E(0, 1), E(1, 0), E(1, 1)};
        const Mat2 got = expm_neg_symmetric(A, B, C);
        worst = std::max(worst, frobenius(got - ref) / frobenius(ref));
    }
    return {worst <= 1e-12, fmt("max relative error %.3e on 1000 samples (bound 1e-12)", worst)};
}

Outcome c3_fiducial() {
    const auto sol = solve_fiducial(FiducialKind::logarithmic, 1.0, 0, 4000);
    const auto d = diagnose(sol);
    const bool a = d.max_residual < 1e-8, b = d.large_ratio_error <= 1e-3, c = d.small_ratio_error <= 1e-3;
    return {a && b && c,
            fmt("residual %.3e [%s]; large-argument ratio error %.3e [%s]; small-r ratio error %.3e [%s] "
                "(inner r dm/dr = %.6f)",
                d.max_residual, a ? "ok" : "fail", d.large_ratio_error, b ? "ok" : "fail", d.small_ratio_error,
                c ? "ok" : "fail", d.inner_log_slope)};
}

Outcome c4_rh() {
    const auto pc = PunctureConfig::legendre(0.5);
    const auto pants = PantsData::legendre(pc, 0.05, 0.004, 0.02, 0.03);
    const auto q = QuadraticDifferential::make(1.0, 0.0, 1.0, pc).rotated(kPi / 2);
    const cplx tau = residues(q)[2];
    const double upsilon = 8 * std::cos(std::arg(tau) / 2);
    const double predicted = -(8 - std::abs(upsilon)) * std::sqrt(std::abs(tau) * pants.s2);
    const auto grid = default_grid();
    std::vector<double> x, la, ld;
    for (std::size_t i : top_decade(grid)) {
        const auto M = rh_xi(grid[i], q, 2, pants);
        x.push_back(std::sqrt(grid[i]));
        la.push_back(std::log(std::abs(M.m.a)) + M.log_scale);
        ld.push_back(std::log(std::abs(M.m.d)) + M.log_scale);
    }
    const double sa = slope(x, la), sd = slope(x, ld);
    const double R = grid.back();
    const auto M = rh_xi(R, q, 2, pants);
    const cplx b = M.m.b * std::exp(M.log_scale + 8 * std::abs(std::sqrt(tau).real()) * std::sqrt(R * pants.s2));
    const double ea = std::abs(sa / predicted - 1), ed = std::abs(sd / predicted - 1), eb = std::abs(b - cplx(0, 1));
    return {ea <= 0.05 && ed <= 0.05 && eb <= 1e-2,
            fmt("slopes |a| %.5f, |d| %.5f vs %.5f (rel %.3f, %.3f; bound 0.05); |b scaled - i| = %.2e (bound 1e-2)",
                sa, sd, predicted, ea, ed, eb)};
}

Outcome c5_lengths() {
    const auto& qs = qstar();
    std::mt19937 g(5);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    double worst2 = 0, worst3 = 0;
    for (int i = 0; i < 5; ++i) {
        const auto hol = AbelianHolonomy::make({u(g), u(g), u(g), u(g)});
        const auto conn = ModelConnection::make(qs.qstar, 1e4, hol, qs.pants);
        worst2 = std::max(worst2, std::abs(hp::to_double(length_coordinate(conn, Loop::zeta2) /
                                                         predict_l(conn, Which::two).exact) - cplx(1)));
        worst3 = std::max(worst3, std::abs(hp::to_double(length_coordinate(conn, Loop::zeta3) /
                                                         predict_l(conn, Which::three).exact) - cplx(1)));
    }
    return {worst2 <= 1e-2 && worst3 <= 1e-2,
            fmt("max |l2/pred - 1| = %.3e, max |l3/pred - 1| = %.3e at R = 1e4 over 5 holonomies (bound 1e-2)", worst2,
                worst3)};
}

Outcome c6_twists() {
    const auto& qs = qstar();
    const auto grid = default_grid();
    const auto top = top_decade(grid);
    std::ostringstream detail;
    bool pass = true;
    for (const auto& h : std::vector<std::array<double, 4>>{{0, 0, 0, 0}, {0, 0, 0.7, 1.3}}) {
        const auto hol = AbelianHolonomy::make(h);
        const auto base = ModelConnection::make(qs.qstar, 1.0, hol, qs.pants);
        std::vector<double> r2(grid.size()), r3(grid.size());
        cli::parallel_for(grid.size(), 0, [&](std::size_t i) {
            const auto c = model_coordinates(base.at_R(grid[i]));
            r2[i] = c.twist2.log_abs_ratio();
            r3[i] = c.twist3.log_abs_ratio();
        });
        bool dec2 = true, dec3 = true;
        for (std::size_t i = 1; i < grid.size(); ++i) {
            dec2 = dec2 && r2[i] < r2[i - 1];
            dec3 = dec3 && r3[i] < r3[i - 1];
        }
        std::vector<double> x, y2, y3;
        for (std::size_t i : top) {
            x.push_back(std::sqrt(grid[i]));
            y2.push_back(r2[i]);
            y3.push_back(r3[i]);
        }
        const double s2 = slope(x, y2), s3 = slope(x, y3);
        const auto t2 = predict_twist(base, Which::two), t3 = predict_twist(base, Which::three);
        const double e2 = std::abs(s2 / t2.rate - 1);
        const double e3 = std::min(std::abs(s3 / t3.rate - 1), std::abs(s3 / t3.rate_alt - 1));
        pass = pass && dec2 && dec3 && e2 <= 0.1 && e3 <= 0.1;
        detail << fmt("hol (%g,%g,%g,%g): twist2 slope %.4f vs %.4f (case %d, decreasing %s), twist3 slope %.4f vs "
                      "%.4f or %.4f (case %d, decreasing %s); ",
                      h[0], h[1], h[2], h[3], s2, t2.rate, t2.case_id, dec2 ? "yes" : "no", s3, t3.rate, t3.rate_alt,
                      t3.case_id, dec3 ? "yes" : "no");
    }
    // Generic holonomy off the congruence: |p2/q2| grows over the top decade.
    const auto generic = ModelConnection::make(qs.qstar, 1.0, AbelianHolonomy::make({1.0, 2.0, 0.7, 1.3}), qs.pants);
    std::vector<double> g2;
    for (std::size_t i : top) g2.push_back(model_coordinates(generic.at_R(grid[i])).twist2.log_abs_ratio());
    bool grows = true;
    for (std::size_t i = 1; i < g2.size(); ++i) grows = grows && g2[i] > g2[i - 1];
    pass = pass && grows;
    detail << fmt("generic hol (1,2,0.7,1.3): log|p2/q2| %.2f -> %.2f over the top decade, growing %s", g2.front(),
                  g2.back(), grows ? "yes" : "no");
    return {pass, detail.str()};
}

Outcome c7_roundtrip() {
    std::mt19937 g(7);
    std::normal_distribution<double> n;
    auto rc = [&] { return hp::from({n(g), n(g)}); };
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        FNCoords c;
        c.l2 = rc() * hp::complex(3);
        c.l3 = rc() * hp::complex(3);
        c.twist2 = {rc(), rc()};
        c.twist3 = {rc(), rc()};
        const auto e = extract_coords(build_representation(c));
        worst = std::max({worst, projective_distance(e.twist2, c.twist2), projective_distance(e.twist3, c.twist3),
                          std::abs(hp::to_double(e.l2 - c.l2)), std::abs(hp::to_double(e.l3 - c.l3))});
    }
    return {worst <= 1e-9, fmt("max distance %.3e over 200 points (bound 1e-9)", worst)};
}

Outcome c8_winding() {
    const auto& qs = qstar();
    const auto base = ModelConnection::make(qs.qstar, 1e4, AbelianHolonomy::make({0.3, 0.4, 0.7, 1.3}), qs.pants);
    const char* names[4] = {"arg l2", "arg p2/q2", "arg l3", "arg p3/q3"};
    const char* slots[4] = {"h1", "h2", "h3", "h4"};
    std::ostringstream detail;
    bool pass = true;
    for (int slot = 0; slot < 4; ++slot) {
        const auto rows = cli::winding_sweep(base, slot, 64);
        const auto w = cli::winding_numbers(rows);
        int winding_once = 0;
        bool others_return = true;
        for (int k = 0; k < 4; ++k) {
            if (std::abs(std::abs(w[k]) - 1) < 1e-2) ++winding_once;
            else if (std::abs(w[k]) * 2 * kPi > 1e-2) others_return = false;
        }
        const bool ok = winding_once == 1 && others_return;
        pass = pass && ok;
        detail << slots[slot] << ": turns (" << fmt("%.3f, %.3f, %.3f, %.3f", w[0], w[1], w[2], w[3]) << ") "
               << (ok ? "ok" : "fail") << "; ";
    }
    detail << "coordinates " << names[0] << ", " << names[1] << ", " << names[2] << ", " << names[3];
    return {pass, detail.str()};
}

Outcome c9_structure() {
    const auto& qs = qstar();
    const auto conn = ModelConnection::make(qs.qstar, 50.0, AbelianHolonomy::make({0, 0, 0, 0}), qs.pants);
    std::mt19937 g(9);
    std::uniform_real_distribution<double> u(-3, 3), rad(0.2, 2.5), ang(0, 2 * kPi);

    // Composition and inversion on paths crossing cuts.
    double comp = 0;
    const auto p1 = ParamPath({cplx(-1.5, -0.5), cplx(-0.6, -0.7), cplx(0.1, -0.4)});
    const auto p2 = ParamPath({cplx(0.1, -0.4), cplx(1.4, -0.6), cplx(1.6, 0.4)});
    int s1 = 0;
    const hp::Mat2 T1 = diagonal_transport_hp(conn, p1, 1, &s1);
    const hp::Mat2 T2 = diagonal_transport_hp(conn, p2, s1);
    const hp::Mat2 T12 = diagonal_transport_hp(conn, p1.then(p2));
    const hp::Mat2 back = diagonal_transport_hp(conn, p1.reversed(), s1);
    comp = std::max(comp, static_cast<double>(hp::max_abs(T2 * T1 - T12) / hp::max_abs(T12)));
    comp = std::max(comp, static_cast<double>(hp::max_abs(back * T1 - hp::Mat2::identity())));

    // Determinants of normalized monodromies.
    double detdev = 0;
    const auto hconn = ModelConnection::make(qs.qstar, 1e4, AbelianHolonomy::make({0.4, 1.2, 0.7, 2.2}), qs.pants);
    for (int j = 0; j < 5; ++j) detdev = std::max(detdev, std::abs(hp::to_double(lasso_monodromy(hconn, j).det()) - cplx(1)));
    for (auto loop : {Loop::zeta2, Loop::zeta3}) {
        const auto M = loop_monodromy(hconn, loop);
        detdev = std::max(detdev, std::abs(M.log_abs_det()) + std::abs(std::remainder(M.det_phase(), 2 * kPi)));
    }

    // Sheet parity on random loops.
    int mismatches = 0;
    for (int i = 0; i < 100; ++i) {
        const cplx c(u(g), 0.5 * u(g));
        const int n = 5 + static_cast<int>(g() % 8);
        std::vector<double> a;
        for (int k = 0; k < n; ++k) a.push_back(ang(g));
        std::sort(a.begin(), a.end());
        std::vector<cplx> pts;
        for (double t : a) pts.push_back(c + std::polar(rad(g), t));
        pts.push_back(pts.front());
        const ParamPath loop(pts);
        if (cut_crossings(qs.qstar, loop) % 2 != sheet_parity(loop, qs.qstar)) ++mismatches;
    }
    return {comp <= 1e-8 && detdev <= 1e-8 && mismatches == 0,
            fmt("composition/inversion defect %.2e, det deviation %.2e (bounds 1e-8); parity mismatches %d/100", comp,
                detdev, mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"period closed form", c1_periods},     {"closed-form exponential", c2_expm},
        {"fiducial solver", c3_fiducial},       {"circle monodromy asymptotics", c4_rh},
        {"length coordinates", c5_lengths},     {"twist rates at the corner point", c6_twists},
        {"Fenchel-Nielsen round trip", c7_roundtrip}, {"holonomy winding", c8_winding},
        {"structural invariants", c9_structure}};

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && static_cast<int>(i + 1) != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
