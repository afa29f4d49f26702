#include "brt/parallel.hpp"

#include <cstdlib>
#include <string>

namespace brt {

std::size_t thread_budget() {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0)
        n = 1;
    if (const char* env = std::getenv("BRT_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1)
                n = std::min(n, static_cast<std::size_t>(cap));
        } catch (...) {
            // ignore malformed values
        }
    }
    return n;
}

} // namespace brt
