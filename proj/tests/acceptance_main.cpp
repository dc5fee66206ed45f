// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure. The same checks back the CLI `validate` subcommand.
#include "moebius/validate.hpp"

#include <iostream>

int main() {
    const auto report = moebius::validate::run_all();
    std::cout << moebius::validate::render_with_timing(report);
    return report.all_passed ? 0 : 1;
}
