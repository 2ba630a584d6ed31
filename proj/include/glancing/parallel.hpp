#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace glancing {

// Explicit request wins; 0 means "look at GLANCING_THREADS, else 1".
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* e = std::getenv("GLANCING_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(e, &end, 10);
        if (end == e || *end != '\0' || v < 1) throw std::invalid_argument(std::string("GLANCING_THREADS must be a positive integer, got '") + e + "'");
        return static_cast<int>(v);
    }
    return 1;
}

// Calls f(i) for i in [0, n). Work is handed out dynamically but every
// result must go to a slot owned by i, so the outcome does not depend on the
// thread count.  The exception from the lowest failing index is rethrown.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
    if (n == 0) return;
    const std::size_t nt = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (nt == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t bad = n;
    std::exception_ptr err;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                if (i < bad) {
                    bad = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt - 1);
    for (std::size_t t = 0; t + 1 < nt; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace glancing
