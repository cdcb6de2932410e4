#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace hitchin::cli;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "hitchin");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
    const std::string path = "/tmp/hitchin_cli_test_" + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config hash is deterministic and sensitive") {
    ExperimentConfig a, b;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.k = 0.3;
    CHECK(config_hash(a) != config_hash(b));
    const auto round = ExperimentConfig::from_json(a.to_json());
    CHECK(config_hash(round) == config_hash(a));
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"k", 1.5}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"unknown", 1}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"R_grid", {{"spacing", "cubic"}}}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"orientation_signs", {1, 1, 0, 1}}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"k", "half"}}), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
    const auto c = ExperimentConfig::from_json(json{{"radii", {{"s2", 0.004}, {"s3", 0.02}, {"s4", 0.03}}}});
    REQUIRE(c.radii);
    CHECK(c.radii->s4 == 0.03);
}

TEST_CASE("R grid") {
    RGrid g;
    const auto v = g.values();
    REQUIRE(v.size() == 20);
    CHECK(v.front() == doctest::Approx(10));
    CHECK(v.back() == 1e5);
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] / v[i - 1] == doctest::Approx(v[1] / v[0]));
}

TEST_CASE("exit codes") {
    CHECK(run_cli({}).code == kConfigFailure);
    CHECK(run_cli({"no-such-command"}).code == kConfigFailure);
    CHECK(run_cli({"periods", "--config", "/nonexistent.json"}).code == kConfigFailure);
    const auto bad = temp_file("bad.json", "{ not json");
    CHECK(run_cli({"periods", "--config", bad}).code == kConfigFailure);
    CHECK(run_cli({"periods", "--k", "2"}).code == kConfigFailure);
    CHECK(run_cli({"fiducial", "--kind", "other"}).code == kConfigFailure);
    CHECK(run_cli({"--help"}).code == kOk);
}

TEST_CASE("periods output is deterministic and matches the closed form") {
    const auto a = run_cli({"periods", "--k", "0.5", "--a", "1", "--b", "0", "--s2", "0.004", "--s3", "0.02", "--s4", "0.03"});
    const auto b = run_cli({"periods", "--k", "0.5", "--a", "1", "--b", "0", "--s2", "0.004", "--s3", "0.02", "--s4", "0.03"});
    REQUIRE(a.code == kOk);
    CHECK(a.out == b.out);
    const auto j = json::parse(a.out);
    CHECK(j["pi1_minus_pi2"][0].get<double>() == doctest::Approx(-0.842875177406298).epsilon(1e-9));
    CHECK(j["closed_form"]["pi1_minus_pi2"].get<double>() == doctest::Approx(-0.842875177406298).epsilon(1e-12));
}

TEST_CASE("config file and environment default") {
    const auto path = temp_file("cfg.json", R"({"k": 0.3, "radii": {"s2": 0.004, "s3": 0.02, "s4": 0.03}})");
    const auto direct = run_cli({"periods", "--config", path});
    REQUIRE(direct.code == kOk);
    setenv(kConfigEnv, path.c_str(), 1);
    const auto via_env = run_cli({"periods"});
    unsetenv(kConfigEnv);
    CHECK(direct.out == via_env.out);
    const auto j = json::parse(direct.out);
    CHECK(j["pi1_minus_pi2"][0].get<double>() == doctest::Approx(-0.3 * 1.608048619930513).epsilon(1e-9));
}

TEST_CASE("CSV outputs carry the config hash and a header") {
    const auto r = run_cli({"converge", "--prop", "l2", "--R-count", "3", "--R-max", "100"});
    REQUIRE(r.code == kOk);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# config_hash=", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("holonomy,R,", 0) == 0);
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);
    const auto again = run_cli({"converge", "--prop", "l2", "--R-count", "3", "--R-max", "100", "--threads", "1"});
    CHECK(again.out == r.out);
}

TEST_CASE("find-qstar reports positive margins") {
    const auto r = run_cli({"find-qstar", "--k", "0.5", "--eps", "0.05"});
    REQUIRE(r.code == kOk);
    const auto j = json::parse(r.out);
    CHECK(j["inequality_margins"]["inequality3"].get<double>() > 0);
    CHECK(j["inequality_margins"]["inequality4"].get<double>() > 0);
}

TEST_CASE("parallel_for propagates failures") {
    std::vector<int> hit(50, 0);
    parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] = 1; });
    CHECK(std::count(hit.begin(), hit.end(), 1) == 50);
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](std::size_t i) {
                                     if (i == 7) throw hitchin::NumericError("boom");
                                 }),
                    hitchin::NumericError);
}

}
