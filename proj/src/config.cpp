#include "aclab/config.hpp"

#include <cstdlib>
#include <thread>

namespace aclab {

int EngineConfig::resolved_threads() const {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("ACLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

const EngineConfig& default_config() {
    static const EngineConfig cfg;
    return cfg;
}

} // namespace aclab
