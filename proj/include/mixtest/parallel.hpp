#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mixtest {

// Runs fn(index) for index in [0, count) on up to `threads` workers
// (0 = hardware concurrency). Each index owns its RNG stream, so results
// do not depend on the schedule. The first exception is rethrown.
template <typename Fn>
void parallel_for(int count, unsigned threads, Fn&& fn) {
    unsigned workers = threads ? threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (workers == 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    const unsigned launched = std::min<unsigned>(workers, static_cast<unsigned>(count));
    pool.reserve(launched);
    for (unsigned t = 0; t < launched; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace mixtest
