#pragma once

#include <stdexcept>
#include <string>

namespace ergolab {

// Parameter outside its documented range, malformed descriptor, bad config file.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A requested budget exceeds a documented ceiling (enumeration caps, bit budgets,
// checkpoint minima).
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation requested within machine epsilon of a critical point.
struct SingularityError : std::runtime_error {
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

// Operation not defined for this family (e.g. branch tracking on a skew product).
struct UnsupportedFamilyError : std::runtime_error {
    explicit UnsupportedFamilyError(const std::string& what) : std::runtime_error(what) {}
};

// Caller broke an API contract (grid mismatch between measures, etc.).
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace ergolab
