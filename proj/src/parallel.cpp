#include "seqstat/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace seqstat {

namespace {

int initial_threads() {
    if (const char* env = std::getenv("SEQSTAT_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) {
            return n;
        }
    }
    return 0;
}

std::atomic<int> configured{initial_threads()};

}

void set_num_threads(int n) {
    configured = n > 0 ? n : 0;
}

int num_threads() {
    int n = configured.load();
    if (n > 0) {
        return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}
