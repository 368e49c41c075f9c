#ifndef TRIGSTAT_VERIFY_HPP
#define TRIGSTAT_VERIFY_HPP

#include <string>
#include <vector>

namespace trigstat {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail; // populated on failure
};

// the exact-identity cross-check suite: closed-form laws, chart
// reproduction, centralizer identities, local densities, and the
// worked curve. Fast; every check is an exact rational or integer
// comparison.
std::vector<CheckResult> run_verification();

bool all_passed(const std::vector<CheckResult>& results);

} // namespace trigstat

#endif
