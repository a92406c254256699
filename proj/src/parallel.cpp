#include "kv/parallel.hpp"

namespace kv {

namespace {
std::atomic<unsigned> thread_cap{0};
}

void set_max_threads(unsigned n) { thread_cap = n; }

unsigned max_threads() {
    unsigned cap = thread_cap.load();
    if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
    return cap;
}

}  // namespace kv
