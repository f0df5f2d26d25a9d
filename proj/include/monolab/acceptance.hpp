#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace monolab {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::vector<std::string> details;  // one line per sub-check
    double seconds = 0.0;
};

inline constexpr int kCriterionCount = 9;

/// Runs one acceptance criterion (1..9) at its stated tolerances.
CriterionResult run_criterion(int id);

/// Runs the given criteria (all when empty), printing the details and one
/// "PASS"/"FAIL" line per criterion. Returns the number of failures.
int run_acceptance(const std::vector<int>& ids, std::ostream& out, bool verbose = true);

}  // namespace monolab
