#pragma once

#include "kms/types.hpp"

#include <string>
#include <vector>

namespace kms {

struct CheckResult {
    std::string name; // "<suite>.<check>"
    bool pass = false;
    std::string detail; // short diagnostic, empty on success
};

// Run one of the built-in self-check suites: "core", "curves", "cusps",
// "classify", "oracle", or "all".  Checks are deterministic (fixed RNG seeds).
// Unknown suite name throws domain_error.
std::vector<CheckResult> run_suite(const std::string& which);

} // namespace kms
