#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "abq/protocol.hpp"

namespace abq::cli {

/// Executor backed by a fixed pool of jobs threads pulling indices from a
/// shared counter. jobs <= 1 yields the empty (serial) executor. The first
/// exception thrown by any body is rethrown on the calling thread after all
/// work drains.
inline Executor make_thread_executor(unsigned jobs) {
    if (jobs <= 1) return {};
    return [jobs](std::size_t count, const std::function<void(std::size_t)>& body) {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr first_error;
        std::mutex error_mutex;

        auto worker = [&]() {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                }
            }
        };

        const unsigned helper_count =
            static_cast<unsigned>(std::min<std::size_t>(jobs, count)) - 1;
        std::vector<std::thread> helpers;
        helpers.reserve(helper_count);
        for (unsigned t = 0; t < helper_count; ++t) helpers.emplace_back(worker);
        worker();
        for (std::thread& t : helpers) t.join();
        if (first_error) std::rethrow_exception(first_error);
    };
}

}  // namespace abq::cli
