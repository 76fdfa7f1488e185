#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ergolab::harness {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
    nlohmann::json results;
};

// Runs every acceptance criterion at its pinned tolerance, printing one
// pass/fail line per criterion to `log`.
std::vector<CriterionResult> run_acceptance_suite(std::ostream& log);

}  // namespace ergolab::harness
