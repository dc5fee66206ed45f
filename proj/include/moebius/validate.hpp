#pragma once

#include <string>
#include <vector>

namespace moebius::validate {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double runtime_seconds = 0.0;
    std::string detail;   // measured residuals; deterministic for a given build
};

struct Report {
    std::vector<CriterionResult> criteria;
    bool all_passed = false;
};

/// Criteria 1-11 (analytic-formula reproduction and oracle equivalence).
Report run_criteria();

/// Criteria 1-11 plus the determinism criterion 12, which re-runs the
/// suite and demands a byte-identical deterministic report.
Report run_all();

/// One line per criterion, no timings; identical across repeated runs.
std::string render(const Report& report);

/// render() plus measured runtimes, for human consumption.
std::string render_with_timing(const Report& report);

}  // namespace moebius::validate
