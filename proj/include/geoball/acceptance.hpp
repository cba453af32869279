#pragma once

#include <string>
#include <vector>

namespace geoball {

struct CriterionResult {
    int id = 0;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

inline constexpr int criterion_count = 10;

// Runs one acceptance criterion, 1..criterion_count. Exceptions are caught
// and reported as a failure.
CriterionResult run_criterion(int id);

} // namespace geoball
