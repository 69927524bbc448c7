#include <cstdio>
#include <exception>

#include "mdpaccel/validate.hpp"

/// Acceptance gate: runs every numbered criterion end to end and prints one
/// verdict line per criterion, with the failing checks spelled out. Exits
/// nonzero when anything fails, so the test runner treats the gate as a
/// single pass/fail unit.
int main() {
    try {
        const auto results = mdpaccel::acceptance_criteria();
        int failed = 0;
        for (const auto& criterion : results) {
            const bool ok = criterion.passed();
            if (!ok) ++failed;
            std::printf("%s - criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion.number,
                        criterion.title.c_str());
            for (const auto& check : criterion.checks) {
                if (!check.pass)
                    std::printf("       failed: %s (%s)\n", check.name.c_str(),
                                check.detail.c_str());
            }
        }
        if (failed == 0) {
            std::printf("all %zu criteria passed\n", results.size());
            return 0;
        }
        std::printf("%d of %zu criteria FAILED\n", failed, results.size());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
        return 1;
    }
}
