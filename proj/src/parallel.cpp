#include "fractus/parallel.hpp"

#include <cstdlib>
#include <string>

namespace fractus {

unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FRACTUS_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) hw = std::min(hw, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
            // unparsable values leave the default in place
        }
    }
    return hw;
}

}  // namespace fractus
