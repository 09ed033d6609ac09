// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <cstdio>

#include "decaylab/acceptance.hpp"

int main() {
    decaylab::AcceptanceConfig config;
    const auto results = decaylab::run_acceptance(config);
    int failures = 0;
    for (const auto& r : results) {
        std::puts(decaylab::format_criterion_line(r).c_str());
        if (!r.pass) ++failures;
    }
    std::printf("%zu criteria, %d failed\n", results.size(), failures);
    return failures == 0 ? 0 : 1;
}
