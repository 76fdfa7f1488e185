#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ergolab/acceptance.hpp"
#include "ergolab/config.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/runner.hpp"

using namespace ergolab;
using namespace ergolab::harness;

namespace {

const char* kSampleConfig = R"(# sample experiment
[experiment]
kind = boweneye
seed = 7

[budgets]
K = 200

[params]
alpha_minus = -2
alpha_plus = 1
beta_minus = -2
beta_plus = 1
)";

}  // namespace

TEST_CASE("config: serialize(parse(text)) is idempotent") {
    const auto c1 = ExperimentConfig::parse(kSampleConfig);
    const std::string s1 = c1.serialize();
    const auto c2 = ExperimentConfig::parse(s1);
    const std::string s2 = c2.serialize();
    CHECK(s1 == s2);
}

TEST_CASE("config: unknown keys carry a line diagnostic") {
    try {
        ExperimentConfig::parse("[experiment]\nkind = decompose\nbogus = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("config: malformed lines and sections are rejected") {
    CHECK_THROWS_AS(ExperimentConfig::parse("[nope]\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("kind = x\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("[experiment]\nkind decompose\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("[budgets]\nN = abc\n"), ConfigError);
}

TEST_CASE("config: budget ceilings are refusals that name the cap") {
    auto cfg = ExperimentConfig::parse(kSampleConfig);
    cfg.N = 1000000000;
    try {
        cfg.validate();
        FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
        CHECK(std::string(e.what()).find("ceiling") != std::string::npos);
    }
}

TEST_CASE("config: system construction per family") {
    ExperimentConfig cfg;
    cfg.family = "logistic";
    cfg.t = 0.8;
    CHECK(cfg.make_system().family() == Family::Logistic);
    cfg.family = "skew_tent";
    cfg.phi_const = 0.9;
    cfg.phi_knots = 32;
    CHECK(cfg.make_system().phi_table().size() == 32);
    cfg.family = "symbolic_doubling";
    CHECK_THROWS_AS(cfg.make_system(), ConfigError);  // program missing
    cfg.program = "(01)x1";
    CHECK(cfg.make_system().is_symbolic());
}

TEST_CASE("run: determinism hash across repeated runs") {
    auto cfg = ExperimentConfig::parse(kSampleConfig);
    const auto a = run(cfg);
    const auto b = run(cfg);
    CHECK(a.results_hash() == b.results_hash());
    CHECK(a.results["limsup"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
    CHECK(a.results["liminf"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
    CHECK(a.exit_code == 0);
}

TEST_CASE("run: decompose doubling reports a single attractor") {
    ExperimentConfig cfg;
    cfg.kind = "decompose";
    cfg.family = "doubling";
    cfg.m = 64;
    const auto rep = run(cfg);
    CHECK(rep.results["attractor_count"].get<int>() == 1);
    CHECK(rep.results["strongly_transitive"].get<bool>());
}

TEST_CASE("run: orbit-stats on the period-2 symbolic orbit has a tiny gap") {
    ExperimentConfig cfg;
    cfg.kind = "orbit-stats";
    cfg.family = "symbolic_doubling";
    cfg.program = "(01)x1";
    cfg.N = 100000;
    cfg.m = 16;
    const auto rep = run(cfg);
    CHECK(rep.results["gap"].get<double>() < 1e-3);
}

TEST_CASE("run: artifacts land in the output directory") {
    const auto dir = std::filesystem::temp_directory_path() / "ergolab_test_out";
    std::filesystem::remove_all(dir);
    ExperimentConfig cfg;
    cfg.kind = "boweneye";
    cfg.K = 100;
    cfg.out_dir = dir.string();
    run(cfg);
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "trace.csv"));
    std::ifstream csv(dir / "trace.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "pass,saddle,log_distance,sojourn_time,fraction_near_a");
    std::filesystem::remove_all(dir);
}

TEST_CASE("run: unknown kind and bad params surface as usage errors") {
    ExperimentConfig cfg;
    cfg.kind = "nonsense";
    CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("report json carries config echo, results, and meta") {
    ExperimentConfig cfg;
    cfg.kind = "boweneye";
    cfg.K = 50;
    const auto rep = run(cfg);
    const auto j = rep.to_json();
    CHECK(j.contains("config"));
    CHECK(j.contains("results"));
    CHECK(j["meta"].contains("wall_seconds"));
    CHECK(j["meta"]["version"].get<std::string>() == kToolVersion);
}
