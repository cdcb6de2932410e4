#include "cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace hitchin::cli {

// ---------------------------------------------------------------- config

std::vector<double> RGrid::values() const {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        v[i] = spacing == "log" ? std::exp(std::log(min) + f * (std::log(max) - std::log(min))) : min + f * (max - min);
    }
    v.back() = max;
    return v;
}

void ExperimentConfig::validate() const {
    if (!(k > 0 && k < 1)) throw ConfigError("k must lie in (0, 1)");
    if (!(epsilon > 0 && epsilon < 0.5)) throw ConfigError("epsilon must lie in (0, 0.5)");
    if (radii && !(radii->s2 > 0 && radii->s3 > 0 && radii->s4 > 0)) throw ConfigError("radii must be positive");
    if (holonomies.empty()) throw ConfigError("at least one holonomy is required");
    if (!(R_grid.min > 0)) throw ConfigError("R_grid.min must be positive");
    if (!(R_grid.max >= R_grid.min)) throw ConfigError("R_grid.max must not be below R_grid.min");
    if (R_grid.count < 2) throw ConfigError("R_grid.count must be at least 2");
    if (R_grid.spacing != "log" && R_grid.spacing != "linear") throw ConfigError("R_grid.spacing must be log or linear");
    for (const auto& [name, v] : tolerances)
        if (!(v > 0)) throw ConfigError("tolerance '" + name + "' must be positive");
    for (int s : orientation_signs)
        if (s != 1 && s != -1) throw ConfigError("orientation_signs entries must be +1 or -1");
}

json ExperimentConfig::to_json() const {
    json j;
    j["k"] = k;
    j["epsilon"] = epsilon;
    if (radii) j["radii"] = {{"s2", radii->s2}, {"s3", radii->s3}, {"s4", radii->s4}};
    j["holonomies"] = holonomies;
    j["R_grid"] = {{"min", R_grid.min}, {"max", R_grid.max}, {"count", R_grid.count}, {"spacing", R_grid.spacing}};
    j["tolerances"] = tolerances;
    j["orientation_signs"] = orientation_signs;
    j["seed"] = seed;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::vector<std::string> known{"k", "epsilon", "radii", "holonomies", "R_grid",
                                                "tolerances", "orientation_signs", "seed"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config field '" + key + "'");
    ExperimentConfig c;
    try {
        if (j.contains("k")) c.k = j.at("k").get<double>();
        if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
        if (j.contains("radii") && !j.at("radii").is_null()) {
            const auto& r = j.at("radii");
            c.radii = Radii{r.at("s2").get<double>(), r.at("s3").get<double>(), r.at("s4").get<double>()};
        }
        if (j.contains("holonomies")) c.holonomies = j.at("holonomies").get<std::vector<std::array<double, 4>>>();
        if (j.contains("R_grid")) {
            const auto& g = j.at("R_grid");
            if (g.contains("min")) c.R_grid.min = g.at("min").get<double>();
            if (g.contains("max")) c.R_grid.max = g.at("max").get<double>();
            if (g.contains("count")) c.R_grid.count = g.at("count").get<int>();
            if (g.contains("spacing")) c.R_grid.spacing = g.at("spacing").get<std::string>();
        }
        if (j.contains("tolerances"))
            for (const auto& [name, v] : j.at("tolerances").items()) c.tolerances[name] = v.get<double>();
        if (j.contains("orientation_signs")) c.orientation_signs = j.at("orientation_signs").get<std::array<int, 4>>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    c.validate();
    return c;
}

Tolerances ExperimentConfig::numeric_tolerances() const {
    Tolerances t;
    if (auto it = tolerances.find("quad_abs"); it != tolerances.end()) t.quad_abs = it->second;
    if (auto it = tolerances.find("ode_local"); it != tolerances.end()) t.ode_local = it->second;
    return t;
}

AbelianHolonomy ExperimentConfig::holonomy(std::size_t i) const {
    if (i >= holonomies.size()) throw ConfigError("holonomy index out of range");
    return AbelianHolonomy::make(holonomies[i], orientation_signs);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return ExperimentConfig::from_json(j);
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string text = cfg.to_json().dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

// ------------------------------------------------------------ serialization

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json complex_json(const hp::complex& z) {
    if (z == hp::complex(0)) return json::array({0.0, 0.0});
    const double la = hp::log_abs(z);
    if (std::abs(la) < 300) return complex_json(hp::to_double(z));
    return {{"form", "log"}, {"log_abs", la}, {"phase", hp::arg(z)}};
}

json fn_json(const FNCoords& c) {
    json j;
    j["l2"] = complex_json(c.l2);
    j["l3"] = complex_json(c.l3);
    j["twist2"] = json::array({complex_json(c.twist2.p), complex_json(c.twist2.q)});
    j["twist3"] = json::array({complex_json(c.twist3.p), complex_json(c.twist3.q)});
    j["twist2_log_abs_ratio"] = c.twist2.log_abs_ratio();
    j["twist2_arg_ratio"] = c.twist2.arg_ratio();
    j["twist3_log_abs_ratio"] = c.twist3.log_abs_ratio();
    j["twist3_arg_ratio"] = c.twist3.arg_ratio();
    j["shape_residual2"] = c.shape_residual2;
    j["shape_residual3"] = c.shape_residual3;
    return j;
}

json periods_json(const PeriodSet& p) {
    json j;
    auto arr = [](const std::array<cplx, 5>& a) {
        json out = json::array();
        for (const auto& z : a) out.push_back(complex_json(z));
        return out;
    };
    j["pi"] = arr(p.pi);
    j["eta"] = arr(p.eta);
    j["local"] = arr(p.local);
    j["sqrt_tau"] = arr(p.sqrt_tau);
    j["psi2"] = complex_json(p.psi2);
    j["psi3"] = complex_json(p.psi3);
    j["pi1_minus_pi2"] = complex_json(p.pi[1] - p.pi[2]);
    j["pi0_minus_pi4"] = complex_json(p.pi[0] - p.pi[4]);
    return j;
}

json qstar_json(const QStarResult& r) {
    json j;
    j["a"] = complex_json(r.qstar.a);
    j["b"] = complex_json(r.qstar.b);
    j["root"] = complex_json(r.qstar.root);
    j["rotation"] = r.rotation;
    j["radii"] = {{"s2", r.s2}, {"s3", r.s3}, {"s4", r.s4}};
    j["x2"] = r.pants.x2.real();
    j["x3"] = r.pants.x3.real();
    j["x4"] = r.pants.x4.real();
    j["phi_star2"] = r.phi_star2;
    j["phi_star3"] = r.phi_star3;
    j["parallel_residual"] = r.parallel_residual;
    j["inequality_margins"] = {{"inequality3", r.margin3}, {"inequality4", r.margin4}};
    j["rates"] = {{"twist2", r.rate2}, {"twist3", r.rate3}, {"twist3_derivation", r.rate3_alt}};
    return j;
}

json twist_report_json(const TwistCaseReport& r) {
    json j;
    j["which"] = static_cast<int>(r.which);
    j["case_id"] = r.case_id;
    j["mirrored"] = r.mirrored;
    j["limit"] = r.limit == Limit::zero_one ? "[0:1]" : "[1:0]";
    j["rate"] = r.rate;
    j["rate_alt"] = r.rate_alt;
    j["tie"] = r.tie;
    json ineq = json::array();
    for (const auto& q : r.inequalities)
        ineq.push_back({{"name", q.name}, {"lhs", q.lhs}, {"rhs", q.rhs}, {"holds", q.holds}, {"tie", q.tie}});
    j["inequalities"] = ineq;
    return j;
}

// ------------------------------------------------------------ experiments

Geometry resolve_geometry(const ExperimentConfig& cfg) {
    const auto pc = PunctureConfig::legendre(cfg.k);
    Geometry g;
    if (cfg.radii) {
        g.pants = PantsData::legendre(pc, cfg.epsilon, cfg.radii->s2, cfg.radii->s3, cfg.radii->s4);
        const auto q0 = QuadraticDifferential::make(1.0, 0.0, 1.0, pc);
        g.q = q0.rotated(section_rotation(q0, g.pants));
        return g;
    }
    g.qstar = find_qstar(pc, cfg.epsilon);
    g.q = g.qstar->qstar;
    g.pants = g.qstar->pants;
    return g;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

namespace {

double unwrap(double prev, double cur) { return prev + std::remainder(cur - prev, 2 * kPi); }

}  // namespace

std::vector<WindingRow> winding_sweep(const ModelConnection& base, int slot, int steps, unsigned threads) {
    if (slot < 0 || slot > 3) throw DomainError("holonomy slot must be 0..3");
    if (steps < 4) throw DomainError("winding sweep needs at least 4 steps");
    std::vector<WindingRow> rows(steps + 1);
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        auto h = base.holonomy().h;
        const double phase = h[slot] + 2 * kPi * static_cast<double>(i) / steps;
        h[slot] = phase;
        // make() would reduce the phase mod 2 pi; the sweep needs the raw value only for reporting.
        const auto hol = AbelianHolonomy::make(h, base.holonomy().orientation_signs);
        const auto conn = base.with_holonomy(hol);
        const auto c = model_coordinates(conn);
        WindingRow r;
        r.phase = phase;
        r.coordinate_phase = {hp::arg(c.l2), c.twist2.arg_ratio(), hp::arg(c.l3), c.twist3.arg_ratio()};
        const auto pred = phase_predictions(hol);
        for (int k = 0; k < 4; ++k) r.predicted_phase[k] = std::arg(pred[k]);
        rows[i] = r;
    });
    for (std::size_t i = 1; i < rows.size(); ++i)
        for (int k = 0; k < 4; ++k) {
            rows[i].coordinate_phase[k] = unwrap(rows[i - 1].coordinate_phase[k], rows[i].coordinate_phase[k]);
            rows[i].predicted_phase[k] = unwrap(rows[i - 1].predicted_phase[k], rows[i].predicted_phase[k]);
        }
    return rows;
}

std::array<double, 4> winding_numbers(const std::vector<WindingRow>& rows) {
    std::array<double, 4> w{};
    if (rows.size() < 2) return w;
    for (int k = 0; k < 4; ++k) w[k] = (rows.back().coordinate_phase[k] - rows.front().coordinate_phase[k]) / (2 * kPi);
    return w;
}

// ------------------------------------------------------------ commands

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Csv {
public:
    Csv(std::ostream& out, const std::string& hash, const std::vector<std::string>& header) : out_(out) {
        out_ << "# config_hash=" << hash << "\n";
        row_strings(header);
    }
    void row(const std::vector<double>& v) {
        std::vector<std::string> s;
        for (double x : v) s.push_back(fmt(x));
        row_strings(s);
    }

private:
    void row_strings(const std::vector<std::string>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) out_ << (i ? "," : "") << v[i];
        out_ << "\n";
    }
    std::ostream& out_;
};

struct Common {
    std::string config_path;
    std::string out_path;
    unsigned threads = 0;
    std::optional<double> k, eps, s2, s3, s4, rmin, rmax;
    std::optional<int> rcount;
    std::optional<std::string> spacing;
    std::optional<std::uint64_t> seed;
    std::vector<double> holonomy;  // overrides the list with one entry
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config_path, "JSON config file (default: $HITCHIN_CONFIG)");
    app->add_option("--out", c.out_path, "Output file (default: stdout)");
    app->add_option("--threads", c.threads, "Worker threads (0: all cores)");
    app->add_option("--k", c.k, "Legendre modulus");
    app->add_option("--eps", c.eps, "Base point offset epsilon");
    app->add_option("--s2", c.s2, "Circle radius around t1, t2");
    app->add_option("--s3", c.s3, "Circle radius around t3");
    app->add_option("--s4", c.s4, "Circle radius around t0, t4");
    app->add_option("--R-min", c.rmin, "Smallest R of the grid");
    app->add_option("--R-max", c.rmax, "Largest R of the grid");
    app->add_option("--R-count", c.rcount, "Number of grid points");
    app->add_option("--spacing", c.spacing, "Grid spacing: log or linear");
    app->add_option("--seed", c.seed, "Seed recorded in the config hash (no subcommand draws random numbers)");
    app->add_option("--holonomy", c.holonomy, "Four holonomy phases h1 h2 h3 h4")->expected(4);
}

ExperimentConfig build_config(const Common& c) {
    ExperimentConfig cfg;
    std::string path = c.config_path;
    if (path.empty())
        if (const char* env = std::getenv(kConfigEnv)) path = env;
    if (!path.empty()) cfg = load_config(path);
    if (c.k) cfg.k = *c.k;
    if (c.eps) cfg.epsilon = *c.eps;
    if (c.s2 || c.s3 || c.s4) {
        if (!(c.s2 && c.s3 && c.s4) && !cfg.radii) throw ConfigError("--s2, --s3 and --s4 must be given together");
        Radii r = cfg.radii.value_or(Radii{});
        if (c.s2) r.s2 = *c.s2;
        if (c.s3) r.s3 = *c.s3;
        if (c.s4) r.s4 = *c.s4;
        cfg.radii = r;
    }
    if (c.rmin) cfg.R_grid.min = *c.rmin;
    if (c.rmax) cfg.R_grid.max = *c.rmax;
    if (c.rcount) cfg.R_grid.count = *c.rcount;
    if (c.spacing) cfg.R_grid.spacing = *c.spacing;
    if (c.seed) cfg.seed = *c.seed;
    if (!c.holonomy.empty()) cfg.holonomies = {{c.holonomy[0], c.holonomy[1], c.holonomy[2], c.holonomy[3]}};
    cfg.validate();
    return cfg;
}

struct Output {
    explicit Output(const std::string& path, std::ostream& fallback) : os(&fallback) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw ConfigError("cannot write '" + path + "'");
            os = &file;
        }
    }
    std::ofstream file;
    std::ostream* os;
};

void cmd_periods(const Common& c, double a, double b, double phi, std::ostream& out) {
    const auto cfg = build_config(c);
    const auto pc = PunctureConfig::legendre(cfg.k);
    PantsData pants;
    if (cfg.radii) pants = PantsData::legendre(pc, cfg.epsilon, cfg.radii->s2, cfg.radii->s3, cfg.radii->s4);
    else pants = find_qstar(pc, cfg.epsilon).pants;
    const auto q = QuadraticDifferential::make(a, b, 1.0, pc).rotated(phi);
    const auto p = compute_periods(q, pants, cfg.numeric_tolerances());
    json j = periods_json(p);
    j["config_hash"] = config_hash(cfg);
    j["q"] = {{"a", complex_json(q.a)}, {"b", complex_json(q.b)}, {"root", complex_json(q.root)}};
    j["radii"] = {{"s2", pants.s2}, {"s3", pants.s3}, {"s4", pants.s4}};
    json res = json::array();
    for (const auto& t : residues(q)) res.push_back(complex_json(t));
    j["residues"] = res;
    if (a == 1.0 && b == 0.0 && phi == 0.0) {
        j["closed_form"] = {{"pi1_minus_pi2", legendre_period_closed_form(cfg.k, LegendreDifference::p1_minus_p2).real()},
                            {"pi0_minus_pi4", legendre_period_closed_form(cfg.k, LegendreDifference::p0_minus_p4).real()}};
    }
    out << j.dump(2) << "\n";
}

void cmd_fiducial(const Common& c, const std::string& kind, double R, int n_grid, double r_min, std::ostream& out,
                  std::ostream& err) {
    const auto cfg = build_config(c);
    FiducialKind fk;
    if (kind == "log" || kind == "logarithmic") fk = FiducialKind::logarithmic;
    else if (kind == "ramification") fk = FiducialKind::ramification;
    else throw ConfigError("--kind must be log or ramification");
    if (!(R > 0)) throw ConfigError("--R must be positive");
    const auto sol = solve_fiducial(fk, R, 0, n_grid, r_min);
    const auto d = diagnose(sol);
    err << "max_residual " << fmt(d.max_residual) << " large_ratio_error " << fmt(d.large_ratio_error)
        << " small_ratio_error " << fmt(d.small_ratio_error) << " inner_log_slope " << fmt(d.inner_log_slope) << "\n";
    Csv csv(out, config_hash(cfg), {"r", "m", "dm"});
    for (std::size_t i = 0; i < sol.r.size(); ++i) csv.row({sol.r[i], sol.m[i], sol.dm[i]});
}

void cmd_monodromy(const Common& c, double R, std::size_t hol_index, int xi3_sign, std::ostream& out) {
    const auto cfg = build_config(c);
    const auto g = resolve_geometry(cfg);
    const auto conn = ModelConnection::make(g.q, R, cfg.holonomy(hol_index), g.pants, cfg.numeric_tolerances());
    const auto coords = model_coordinates(conn, xi3_sign);
    const double tie = cfg.tolerances.count("tie") ? cfg.tolerances.at("tie") : 1e-9;
    json j;
    j["config_hash"] = config_hash(cfg);
    j["R"] = R;
    j["holonomy"] = conn.holonomy().h;
    j["rotation"] = g.qstar ? g.qstar->rotation : 0.0;
    j["coords"] = fn_json(coords);
    const auto p2 = predict_l(conn, Which::two), p3 = predict_l(conn, Which::three);
    j["predicted"] = {{"l2", {{"form", "log"}, {"log_abs", p2.value.log_abs}, {"phase", p2.value.phase}}},
                      {"l3", {{"form", "log"}, {"log_abs", p3.value.log_abs}, {"phase", p3.value.phase}}},
                      {"twist2", twist_report_json(predict_twist(conn, Which::two, tie))},
                      {"twist3", twist_report_json(predict_twist(conn, Which::three, tie))}};
    out << j.dump(2) << "\n";
}

void cmd_converge(const Common& c, const std::string& prop, double phi, int j_index, std::ostream& out) {
    const auto cfg = build_config(c);
    const auto grid = cfg.R_grid.values();
    const std::string hash = config_hash(cfg);
    const auto tol = cfg.numeric_tolerances();
    const double tie = cfg.tolerances.count("tie") ? cfg.tolerances.at("tie") : 1e-9;

    if (prop == "rh-xi") {
        const auto pc = PunctureConfig::legendre(cfg.k);
        PantsData pants = cfg.radii ? PantsData::legendre(pc, cfg.epsilon, cfg.radii->s2, cfg.radii->s3, cfg.radii->s4)
                                    : find_qstar(pc, cfg.epsilon).pants;
        const auto q = QuadraticDifferential::make(1.0, 0.0, 1.0, pc).rotated(phi);
        const cplx tau = residues(q)[j_index];
        const double s = pants.radius(j_index);
        const double upsilon = 8 * std::cos(std::arg(tau) / 2);
        const double slope = -(8 - std::abs(upsilon)) * std::sqrt(std::abs(tau) * s);
        const double re_sqrt_tau = std::abs(std::sqrt(tau).real());
        std::vector<std::vector<double>> rows(grid.size());
        parallel_for(grid.size(), c.threads, [&](std::size_t i) {
            const double R = grid[i];
            const auto M = rh_xi(R, q, j_index, pants);
            const cplx bscaled = M.m.b * std::exp(M.log_scale + 8 * re_sqrt_tau * std::sqrt(R * s));
            const double la = std::log(std::abs(M.m.a)) + M.log_scale;
            const double ld = std::log(std::abs(M.m.d)) + M.log_scale;
            const double err = std::abs(bscaled - cplx(0, 1));
            rows[i] = {R, 0.0, 1.0, bscaled.real(), bscaled.imag(), err, err, la, ld, slope};
        });
        Csv csv(out, hash,
                {"R", "predicted_re", "predicted_im", "computed_re", "computed_im", "abs_err", "rel_err", "log_abs_a",
                 "log_abs_d", "predicted_slope"});
        for (const auto& r : rows) csv.row(r);
        return;
    }

    const bool is_l = prop == "l2" || prop == "l3";
    const bool is_t = prop == "twist2" || prop == "twist3";
    if (!is_l && !is_t) throw ConfigError("--prop must be one of rh-xi, l2, l3, twist2, twist3");
    const Which which = (prop == "l2" || prop == "twist2") ? Which::two : Which::three;
    const auto g = resolve_geometry(cfg);
    const auto conn0 = ModelConnection::make(g.q, 1.0, cfg.holonomy(0), g.pants, tol);
    const std::size_t nh = cfg.holonomies.size();
    std::vector<std::vector<double>> rows(nh * grid.size());
    parallel_for(rows.size(), c.threads, [&](std::size_t idx) {
        const std::size_t h = idx / grid.size(), i = idx % grid.size();
        const double R = grid[i];
        const auto conn = conn0.with_holonomy(cfg.holonomy(h)).at_R(R);
        if (is_l) {
            const auto pred = predict_l(conn, which);
            const hp::complex l = length_coordinate(conn, which == Which::two ? Loop::zeta2 : Loop::zeta3);
            const auto comp = LogForm::of(l);
            const hp::complex diff = l - pred.exact;
            const double log_abs_err = diff == hp::complex(0) ? -INFINITY : hp::log_abs(diff);
            const double rel = std::exp(log_abs_err - pred.value.log_abs);
            rows[idx] = {static_cast<double>(h), R, pred.value.log_abs, pred.value.phase, comp.log_abs, comp.phase,
                         log_abs_err, rel};
        } else {
            const auto rep = predict_twist(conn, which, tie);
            const auto fn = model_coordinates(conn);
            const auto& t = which == Which::two ? fn.twist2 : fn.twist3;
            const double predicted = rep.rate * std::sqrt(R);
            const double computed = t.log_abs_ratio();
            const double abs_err = std::abs(computed - predicted);
            rows[idx] = {static_cast<double>(h), R, predicted, computed, abs_err,
                         predicted != 0 ? abs_err / std::abs(predicted) : INFINITY, static_cast<double>(rep.case_id),
                         rep.limit == Limit::zero_one ? 0.0 : 1.0, rep.rate, rep.rate_alt,
                         which == Which::two ? fn.shape_residual2 : fn.shape_residual3};
        }
    });
    if (is_l) {
        Csv csv(out, hash,
                {"holonomy", "R", "predicted_log_abs", "predicted_phase", "computed_log_abs", "computed_phase",
                 "abs_err_log", "rel_err"});
        for (const auto& r : rows) csv.row(r);
    } else {
        Csv csv(out, hash,
                {"holonomy", "R", "predicted", "computed", "abs_err", "rel_err", "case_id", "limit_is_one_zero", "rate",
                 "rate_alt", "shape_residual"});
        for (const auto& r : rows) csv.row(r);
    }
}

void cmd_find_qstar(const Common& c, std::ostream& out) {
    const auto cfg = build_config(c);
    const auto r = find_qstar(PunctureConfig::legendre(cfg.k), cfg.epsilon);
    json j = qstar_json(r);
    j["config_hash"] = config_hash(cfg);
    out << j.dump(2) << "\n";
}

void cmd_winding(const Common& c, int slot, double R, int steps, std::size_t hol_index, std::ostream& out) {
    const auto cfg = build_config(c);
    if (slot < 1 || slot > 4) throw ConfigError("--slot must be 1..4");
    const auto g = resolve_geometry(cfg);
    const auto conn = ModelConnection::make(g.q, R, cfg.holonomy(hol_index), g.pants, cfg.numeric_tolerances());
    const auto rows = winding_sweep(conn, slot - 1, steps, c.threads);
    Csv csv(out, config_hash(cfg),
            {"phase", "arg_l2", "arg_twist2", "arg_l3", "arg_twist3", "pred_1", "pred_2", "pred_3", "pred_4"});
    for (const auto& r : rows)
        csv.row({r.phase, r.coordinate_phase[0], r.coordinate_phase[1], r.coordinate_phase[2], r.coordinate_phase[3],
                 r.predicted_phase[0], r.predicted_phase[1], r.predicted_phase[2], r.predicted_phase[3]});
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral-curve periods, model monodromy and Fenchel-Nielsen asymptotics"};
    app.require_subcommand(1);

    Common c_periods, c_fid, c_mono, c_conv, c_q, c_wind;

    auto* periods = app.add_subcommand("periods", "Period integrals of the pants contours (JSON)");
    add_common(periods, c_periods);
    double a = 1, b = 0, phi_p = 0;
    periods->add_option("--a", a, "Coefficient a (real)");
    periods->add_option("--b", b, "Coefficient b (real)");
    periods->add_option("--phi", phi_p, "Hopf rotation applied to (a, b)");

    auto* fid = app.add_subcommand("fiducial", "Fiducial profile on its grid (CSV)");
    add_common(fid, c_fid);
    std::string kind = "log";
    double fid_R = 1, r_min = 1e-8;
    int n_grid = 400;
    fid->add_option("--kind", kind, "log or ramification");
    fid->add_option("--R", fid_R, "Scale R");
    fid->add_option("--n-grid", n_grid, "Grid points")->check(CLI::Range(8, 1000000));
    fid->add_option("--r-min", r_min, "Innermost radius")->check(CLI::PositiveNumber);

    auto* mono = app.add_subcommand("monodromy", "Fenchel-Nielsen coordinates of the model at one R (JSON)");
    add_common(mono, c_mono);
    double mono_R = 1e4;
    std::size_t mono_h = 0;
    int xi3_sign = 1;
    mono->add_option("--R", mono_R, "Scale R")->check(CLI::PositiveNumber);
    mono->add_option("--hol-index", mono_h, "Index into the holonomy list");
    mono->add_option("--xi3-sign", xi3_sign, "Orientation of the circle around t3")->check(CLI::IsMember({1, -1}));

    auto* conv = app.add_subcommand("converge", "Computed versus predicted along the R grid (CSV)");
    add_common(conv, c_conv);
    std::string prop;
    double conv_phi = kPi / 2;
    int conv_j = 2;
    conv->add_option("--prop", prop, "rh-xi, l2, l3, twist2 or twist3")
        ->required()
        ->check(CLI::IsMember({"rh-xi", "l2", "l3", "twist2", "twist3"}));
    conv->add_option("--phi", conv_phi, "Hopf rotation of the Legendre point (rh-xi only)");
    conv->add_option("--j", conv_j, "Puncture index (rh-xi only)")->check(CLI::Range(0, 4));

    auto* fq = app.add_subcommand("find-qstar", "Matched radii and the corner base point (JSON)");
    add_common(fq, c_q);

    auto* wind = app.add_subcommand("winding", "Coordinate phases along a holonomy loop (CSV)");
    add_common(wind, c_wind);
    int slot = 1, steps = 64;
    double wind_R = 1e4;
    std::size_t wind_h = 0;
    wind->add_option("--slot", slot, "Holonomy phase to sweep, 1..4")->check(CLI::Range(1, 4));
    wind->add_option("--R", wind_R, "Scale R")->check(CLI::PositiveNumber);
    wind->add_option("--steps", steps, "Steps over one turn")->check(CLI::Range(4, 100000));
    wind->add_option("--hol-index", wind_h, "Index into the holonomy list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigFailure;
    }

    try {
        auto emit = [&](const Common& c, const std::function<void(std::ostream&)>& f) {
            Output o(c.out_path, out);
            f(*o.os);
        };
        if (*periods) emit(c_periods, [&](std::ostream& os) { cmd_periods(c_periods, a, b, phi_p, os); });
        else if (*fid) emit(c_fid, [&](std::ostream& os) { cmd_fiducial(c_fid, kind, fid_R, n_grid, r_min, os, err); });
        else if (*mono) emit(c_mono, [&](std::ostream& os) { cmd_monodromy(c_mono, mono_R, mono_h, xi3_sign, os); });
        else if (*conv) emit(c_conv, [&](std::ostream& os) { cmd_converge(c_conv, prop, conv_phi, conv_j, os); });
        else if (*fq) emit(c_q, [&](std::ostream& os) { cmd_find_qstar(c_q, os); });
        else if (*wind) emit(c_wind, [&](std::ostream& os) { cmd_winding(c_wind, slot, wind_R, steps, wind_h, os); });
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigFailure;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kConfigFailure;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kNumericFailure;
    }
    return kOk;
}

}  // namespace hitchin::cli
