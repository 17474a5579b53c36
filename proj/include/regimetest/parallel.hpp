#pragma once

#include <cstddef>
#include <functional>

namespace regimetest {

// Worker count: REGIMETEST_THREADS when set (values < 1 mean 1), otherwise
// hardware concurrency. Read fresh on every call.
unsigned thread_cap();

// Runs fn(0..n-1) across up to thread_cap() threads. fn must only touch
// state owned by its index. If calls throw, the exception for the smallest
// failing index is rethrown, independent of the partition.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace regimetest
