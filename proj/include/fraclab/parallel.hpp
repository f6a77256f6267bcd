#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fraclab {

inline unsigned default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Runs fn(begin, end) over a fixed partition of [0, n).  The partition
// depends only on (n, workers), never on scheduling, so per-chunk results
// combined in chunk order are deterministic.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    if (n == 0) return;
    workers = std::max(1u, workers);
    const std::size_t nchunks = std::min<std::size_t>(workers, n);
    if (nchunks == 1) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(nchunks);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    const std::size_t base = n / nchunks, rem = n % nchunks;
    std::size_t begin = 0;
    for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t len = base + (c < rem ? 1 : 0);
        const std::size_t end = begin + len;
        threads.emplace_back([&, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Deterministic map-reduce: chunk results are merged in chunk order.
template <typename T, typename Map, typename Merge>
T parallel_reduce(std::size_t n, unsigned workers, T init, Map&& map_chunk, Merge&& merge) {
    workers = std::max(1u, workers);
    const std::size_t nchunks = std::min<std::size_t>(workers, std::max<std::size_t>(n, 1));
    std::vector<T> partial(nchunks, init);
    parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
        // Recompute the chunk id from the fixed partition.
        const std::size_t base = n / nchunks, rem = n % nchunks;
        std::size_t c = 0, b = 0;
        while (c < nchunks) {
            const std::size_t len = base + (c < rem ? 1 : 0);
            if (b == begin) break;
            b += len;
            ++c;
        }
        partial[c] = map_chunk(begin, end);
    });
    T out = init;
    for (const auto& p : partial) out = merge(out, p);
    return out;
}

}  // namespace fraclab
