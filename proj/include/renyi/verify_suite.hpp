#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace renyi {

struct CheckResult {
    std::string id;
    bool passed;
    double worst;      // largest violation observed; pass iff worst <= tolerance
    double tolerance;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 42;
    int max_dim = 4;   // largest quantum dimension exercised
    int trials = 40;   // instance count scale for the cheap checks
    std::optional<std::string> only;  // run only the check with this id (or substring)
    std::map<std::string, double> tolerance_overrides;
};

/// Runs every invariant of the library on seeded random instances.
/// Deterministic for a fixed seed regardless of filtering.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

/// All check ids, in execution order.
std::vector<std::string> verification_ids();

}  // namespace renyi
