// Acceptance gate: runs every verification suite on the pinned corpus and
// prints one pass/fail line per criterion. Exit 0 iff all pass.

#include <cstdio>
#include <exception>

#include "aclab/suites.hpp"

int main() {
    using namespace aclab;

    struct Criterion {
        int number;
        const char* suite;
        const char* description;
    };
    const Criterion criteria[] = {
        {1, "lo", "linear exactness and the min(1/2, 1/sqrt(m)) bound"},
        {2, "bilo", "bilinear tightness and the explicit-constant bound"},
        {3, "decouple", "decoupling inequality on random event tables"},
        {4, "quad", "quadratic reduction: P^2 <= decoupled probability on every balanced split"},
        {5, "rank1", "rank-one extraction on planted instances"},
        {6, "heights", "fraction-height counting vs direct brute force + frozen maximum"},
        {7, "shatter", "shattering families: size, coverage, success frequency"},
        {8, "incidence", "point/line mapping consistency and the weighted incidence bound"},
        {9, "halasz", "halasz ratio under the frozen constant"},
        {10, "tuple", "tuple structure recovery and exact expected commensurability"},
    };

    SuiteOptions opt; // pinned corpus seed and frozen constants
    bool all_passed = true;
    for (const auto& c : criteria) {
        SuiteResult res;
        try {
            res = run_suite(c.suite, opt);
        } catch (const std::exception& e) {
            std::printf("criterion %2d [FAIL] %s: exception: %s\n", c.number, c.suite, e.what());
            all_passed = false;
            continue;
        }
        std::printf("criterion %2d [%s] %s: %s (%zu cases, %zu failures%s%s)\n", c.number,
                    res.passed ? "PASS" : "FAIL", c.suite, c.description, res.cases_run, res.failures,
                    res.summary.empty() ? "" : "; ", res.summary.c_str());
        std::fflush(stdout);
        all_passed = all_passed && res.passed;
    }
    return all_passed ? 0 : 1;
}
