#include "regimetest/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace regimetest {

unsigned thread_cap() {
    if (const char* env = std::getenv("REGIMETEST_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
        return 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t workers = std::min<std::size_t>(thread_cap(), n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    struct Failure {
        std::size_t index;
        std::exception_ptr error;
    };
    std::vector<Failure> failures(workers, Failure{0, nullptr});

    // Contiguous blocks; a worker stops at its first failure, so the recorded
    // index is the smallest failing one inside its block.
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) {
                try {
                    fn(i);
                } catch (...) {
                    failures[w] = Failure{i, std::current_exception()};
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();

    const Failure* first = nullptr;
    for (const auto& f : failures) {
        if (f.error && (first == nullptr || f.index < first->index)) first = &f;
    }
    if (first != nullptr) std::rethrow_exception(first->error);
}

}  // namespace regimetest
