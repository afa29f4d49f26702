#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace brt {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Named validation suites: "geometry", "laws", "gibbs", "thermo",
// "determinism", or "all". Every check pins its own sample sizes and
// tolerances.
std::vector<CheckResult> validate_suite(const std::string& suite, std::uint64_t seed);

} // namespace brt
