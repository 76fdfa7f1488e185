#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ergolab/acceptance.hpp"
#include "ergolab/config.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ergolab: ergodic-formalism numerical laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;

    const char* kinds[] = {"orbit-stats", "spectrum", "optimize", "decompose",
                           "growing", "boweneye"};
    for (const char* kind : kinds) {
        auto* sub = app.add_subcommand(kind, std::string("run a ") + kind + " experiment");
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory for report.json and CSVs");
        sub->add_option_function<std::uint64_t>(
            "--seed", [&seed, &seed_set](std::uint64_t s) { seed = s; seed_set = true; },
            "override the config seed");
    }
    auto* accept = app.add_subcommand("acceptance", "run the acceptance suite");
    accept->add_option("--out", out_dir, "output directory for report.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (accept->parsed()) {
            ergolab::harness::ExperimentConfig cfg;
            cfg.kind = "acceptance";
            cfg.out_dir = out_dir;
            const auto report = ergolab::harness::run(cfg);
            std::cout << report.results["log"].get<std::string>();
            return report.exit_code;
        }
        ergolab::harness::ExperimentConfig cfg = ergolab::harness::ExperimentConfig::load(config_path);
        cfg.kind = app.get_subcommands().front()->get_name();
        if (seed_set) cfg.seed = seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        const auto report = ergolab::harness::run(cfg);
        std::cout << report.to_json().dump(2) << "\n";
        return report.exit_code;
    } catch (const ergolab::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ergolab::BudgetError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
