#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "ergolab/config.hpp"

namespace ergolab::harness {

inline constexpr const char* kToolVersion = "ergolab 0.1.0";

struct RunReport {
    nlohmann::json config_echo;
    nlohmann::json results;  // every numeric field reproduces byte-for-byte across runs
    double wall_seconds = 0.0;
    std::string version = kToolVersion;
    int exit_code = 0;  // 0 ok, 1 verdict failure, 2 usage error

    nlohmann::json to_json() const;
    // FNV-1a over the canonical dump of the results subtree (wall time excluded).
    std::uint64_t results_hash() const;
};

// Dispatch to the owning module; writes report.json and per-kind CSV artifacts
// into out_dir when it is nonempty.
RunReport run(const ExperimentConfig& config);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace ergolab::harness
