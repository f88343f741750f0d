#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tmk {

// Worker count: TMK_THREADS env var, else hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("TMK_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Deterministic chunked parallel map: fn(chunk_index) -> vector<T>; the
// results are concatenated in chunk order, so the output is identical for
// every worker count.
template <typename T, typename Fn>
std::vector<T> parallel_chunks(long n_chunks, Fn&& fn) {
    std::vector<std::vector<T>> parts(static_cast<size_t>(n_chunks));
    int workers = std::min<long>(worker_count(), n_chunks);
    if (workers <= 1) {
        for (long c = 0; c < n_chunks; ++c) parts[static_cast<size_t>(c)] = fn(c);
    } else {
        std::atomic<long> next(0);
        std::vector<std::thread> pool;
        std::exception_ptr err;
        std::mutex err_mu;
        for (int wkr = 0; wkr < workers; ++wkr)
            pool.emplace_back([&]() {
                while (true) {
                    long c = next.fetch_add(1);
                    if (c >= n_chunks) return;
                    try {
                        parts[static_cast<size_t>(c)] = fn(c);
                    } catch (...) {
                        std::lock_guard<std::mutex> lk(err_mu);
                        if (!err) err = std::current_exception();
                        return;
                    }
                }
            });
        for (auto& t : pool) t.join();
        if (err) std::rethrow_exception(err);
    }
    std::vector<T> out;
    size_t total = 0;
    for (auto& p : parts) total += p.size();
    out.reserve(total);
    for (auto& p : parts)
        for (auto& x : p) out.push_back(std::move(x));
    return out;
}

}  // namespace tmk
