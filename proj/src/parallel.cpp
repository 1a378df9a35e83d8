#include "pingpong_lab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace pplab {

int thread_count() {
    if (const char* env = std::getenv("PINGPONG_LAB_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) return n;
        } catch (...) {
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace pplab
