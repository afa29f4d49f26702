// Acceptance suite: runs every structural-law and estimator check at its
// pinned sample size and tolerance, prints one pass/fail line per
// criterion, and exits non-zero on any failure.

#include <cstdio>
#include <cstring>
#include <string>

#include "brt/validation.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 20240901;
    std::string suite = "all";
    for (int i = 1; i < argc; ++i) {
        if (std::strncmp(argv[i], "--seed=", 7) == 0)
            seed = std::stoull(argv[i] + 7);
        else if (std::strncmp(argv[i], "--suite=", 8) == 0)
            suite = argv[i] + 8;
    }
    const auto results = brt::validate_suite(suite, seed);
    bool all_pass = true;
    double total = 0.0;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        total += r.seconds;
        std::printf("[%s] %-24s %s  [%.1fs]\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str(), r.seconds);
    }
    std::printf("%zu criteria, %s, %.1fs total\n", results.size(),
                all_pass ? "all passed" : "FAILURES PRESENT", total);
    return all_pass ? 0 : 1;
}
