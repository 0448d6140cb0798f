#include "crossmatch/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace crossmatch {

std::size_t worker_count() {
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("CROSSMATCH_THREADS")) {
        try {
            const long value = std::stol(cap);
            if (value >= 1) workers = std::min(workers, static_cast<std::size_t>(value));
        } catch (const std::exception&) {
            // unparseable cap is ignored
        }
    }
    return workers;
}

}  // namespace crossmatch
