#pragma once

#include <string>
#include <vector>

namespace lans {

struct AcceptanceCheck {
    std::string name;
    double value = 0.0;
    std::string requirement;
    bool passed = false;
};

/// A criterion passes when every check passes and it finished within budget.
struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    double seconds = 0.0;
    double budget = 0.0;  // seconds; 0 means unbudgeted
    std::vector<AcceptanceCheck> checks;
    std::string error;    // exception text if the run threw
};

std::vector<int> criterion_ids();
CriterionResult run_criterion(int id);
/// Runs the criteria on up to `jobs` threads; results follow the order of ids.
/// Concurrent runs share the CPU, so budgets are only meaningful with jobs = 1.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::size_t jobs = 1);

/// One line: PASS/FAIL, id, title, time and the checks.
std::string summary_line(const CriterionResult& r);

} // namespace lans
