#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hitchin/asymptotics.hpp"

namespace hitchin::cli {

using json = nlohmann::json;

// Invalid configuration or command line; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode { kOk = 0, kNumericFailure = 1, kConfigFailure = 2 };

struct RGrid {
    double min = 10;
    double max = 1e5;
    int count = 20;
    std::string spacing = "log";  // "log" or "linear"
    std::vector<double> values() const;
};

struct Radii {
    double s2 = 0, s3 = 0, s4 = 0;
};

struct ExperimentConfig {
    double k = 0.5;
    double epsilon = 0.05;
    std::optional<Radii> radii;  // absent: taken from find_qstar
    std::vector<std::array<double, 4>> holonomies{{0.0, 0.0, 0.0, 0.0}};
    RGrid R_grid;
    std::map<std::string, double> tolerances{{"quad_abs", 1e-10}, {"ode_local", 1e-10}, {"tie", 1e-9}};
    std::array<int, 4> orientation_signs{1, 1, 1, 1};
    std::uint64_t seed = 1;

    void validate() const;
    json to_json() const;
    static ExperimentConfig from_json(const json& j);
    Tolerances numeric_tolerances() const;
    AbelianHolonomy holonomy(std::size_t i) const;
};

// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "HITCHIN_CONFIG";

ExperimentConfig load_config(const std::string& path);
// FNV-1a (64 bit) of the canonical JSON text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

json complex_json(cplx z);
// [re, im] when representable in double, otherwise the log form.
json complex_json(const hp::complex& z);
json fn_json(const FNCoords& c);
json periods_json(const PeriodSet& p);
json qstar_json(const QStarResult& r);
json twist_report_json(const TwistCaseReport& r);

// Pants geometry and base point used by the experiments: radii from the
// config (rotated onto the section) or the full q* construction.
struct Geometry {
    QuadraticDifferential q;
    PantsData pants;
    std::optional<QStarResult> qstar;
};
Geometry resolve_geometry(const ExperimentConfig& cfg);

// Runs fn(i) for i in [0, n) on up to `threads` workers (0: hardware
// concurrency). Results are stored by index; the first failure by index is
// rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

struct WindingRow {
    double phase = 0;
    std::array<double, 4> coordinate_phase{};  // arg l2, arg p2/q2, arg l3, arg p3/q3, unwrapped
    std::array<double, 4> predicted_phase{};   // phase_predictions, unwrapped
};
// Sweeps holonomy slot (0..3) over [0, 2 pi] in `steps` steps.
std::vector<WindingRow> winding_sweep(const ModelConnection& base, int slot, int steps, unsigned threads = 0);
// Net turns of each coordinate phase over a sweep.
std::array<double, 4> winding_numbers(const std::vector<WindingRow>& rows);

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hitchin::cli
