#pragma once

#include <cstddef>
#include <cstdint>

namespace aclab {

// Budgets and execution knobs for the exact engines. All overridable from
// the CLI; the defaults below are the documented desk-scale caps.
struct EngineConfig {
    // Maximum number of assignments a full enumeration may visit (2^26).
    std::size_t enum_cap = std::size_t(1) << 26;
    // Maximum support size of a convolution DP.
    std::size_t dp_support_cap = 10'000'000;
    // 0 = auto: ACLAB_THREADS env var, else hardware concurrency.
    int threads = 0;
    // Force the arbitrary-precision engine even when the scaled int64 fast
    // path applies (used by tests to cross-check the two paths).
    bool force_generic = false;

    int resolved_threads() const;
};

const EngineConfig& default_config();

} // namespace aclab
