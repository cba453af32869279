// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "geoball/acceptance.hpp"

#include <fmt/core.h>

#include <cstdio>

int main()
{
    int failures = 0;
    for (int id = 1; id <= geoball::criterion_count; ++id) {
        auto r = geoball::run_criterion(id);
        fmt::print("{} criterion {}: {} [{:.2f} s]\n", r.pass ? "PASS" : "FAIL", id, r.detail, r.seconds);
        std::fflush(stdout);
        if (!r.pass) ++failures;
    }
    fmt::print("{} of {} criteria failed\n", failures, geoball::criterion_count);
    return failures ? 1 : 0;
}
