#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aclab/bounds.hpp"
#include "aclab/config.hpp"

namespace aclab {

// One checked case inside a suite (a row of the CSV rendering).
struct SuiteCase {
    std::string label;
    bool passed = false;
    double observed = 0.0; // probability or ratio, for the table
    std::string detail;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::size_t cases_run = 0;
    std::size_t failures = 0;
    std::string summary;
    std::vector<SuiteCase> cases;
};

struct SuiteOptions {
    // Seed of the fixed verification corpus. The default pins the corpus the
    // fitted constants were calibrated on.
    std::uint64_t seed = 20240601;
    FittedConstants constants;
    EngineConfig engine;
    // Failing cases recorded per suite before the list is truncated.
    std::size_t max_recorded_cases = 64;
};

// Suite names accepted by run_suite (and the CLI `verify` subcommand).
const std::vector<std::string>& suite_names();

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt = {});

} // namespace aclab
