#pragma once

// Acceptance suite: one check per contract criterion, each printed as a
// single pass/fail line. Shared by the `selftest` CLI command and the
// acceptance test binary.

#include <iosfwd>

namespace cxhyp {

struct AcceptanceOptions {
    bool verbose = false;
};

// Runs every criterion; returns the number of failures.
int run_acceptance_suite(std::ostream& os, const AcceptanceOptions& opts = {});

} // namespace cxhyp
