#include "chialvo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace chialvo {

int default_workers() {
    if (const char* env = std::getenv("CHIALVO_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w >= 1) return w;
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t w = std::min<std::size_t>(std::max(1, workers), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    // the lowest failing index wins so the reported error does not depend on timing
    std::exception_ptr err;
    std::size_t err_index = n;
    std::mutex err_mu;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(w - 1);
    for (std::size_t t = 1; t < w; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace chialvo
