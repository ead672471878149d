#include "rydsim/cli/pool.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rydsim::cli {

std::size_t default_worker_count() {
    if (const char* env = std::getenv("RYDSIM_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

ParallelFor make_thread_pool(std::size_t workers) {
    if (workers <= 1) return serial_for;
    return [workers](std::size_t count, const std::function<void(std::size_t)>& body) {
        const std::size_t threads = std::min(workers, count);
        if (threads <= 1) {
            serial_for(count, body);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto work = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed = true;
                }
            }
        };
        {
            std::vector<std::jthread> pool;
            pool.reserve(threads - 1);
            for (std::size_t t = 0; t + 1 < threads; ++t) pool.emplace_back(work);
            work();
        }
        if (error) std::rethrow_exception(error);
    };
}

}  // namespace rydsim::cli
