#pragma once

#include <string>
#include <vector>

namespace mdpaccel {

/// One end-to-end validation check: a stable name, the verdict, and enough
/// detail (measured vs expected numbers) to act on a failure.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// A numbered acceptance criterion with its individual checks.
struct CriterionResult {
    int number = 0;
    std::string title;
    std::vector<CheckResult> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

/// Runs the full acceptance battery (criteria 1 through 12) end to end on
/// pinned fixtures. Failed assertions come back as failed checks; exceptions
/// are reserved for broken plumbing.
std::vector<CriterionResult> acceptance_criteria();

/// Named suites for the command line: rates, scaling, relaxation,
/// divergence, lower-bound, spectral, certificates, oracle, reproducibility,
/// all. Throws std::invalid_argument on an unknown name.
std::vector<std::string> suite_names();
std::vector<CriterionResult> run_suite(const std::string& name);

}  // namespace mdpaccel
