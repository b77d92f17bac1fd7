#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace diffshape {

// Partial sums of one scalar statistic over Monte Carlo paths.
struct Tally {
    double sum = 0.0;
    double sumsq = 0.0;
    long n = 0;
    long discarded = 0;
};

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(i) for i in [0, n) across threads in fixed-size chunks and merges
// per-chunk partial sums in chunk order, so the result is independent of the
// thread count and of scheduling. body returns {keep, value}; dropped samples
// are counted as discarded.
//
// Within a chunk the sums use Kahan compensation; across chunks the merge is
// sequential over ~n/4096 well-scaled partials, keeping the result stable to
// well below 1e-12 relative error.
template <class Body>
Tally parallel_tally(std::size_t n, int threads, Body&& body) {
    constexpr std::size_t kChunk = 4096;
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<Tally> partial(n_chunks);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            const std::size_t lo = c * kChunk;
            const std::size_t hi = std::min(n, lo + kChunk);
            Tally t;
            double comp = 0.0;
            for (std::size_t i = lo; i < hi; ++i) {
                const auto sample = body(i);
                if (!sample.first) {
                    ++t.discarded;
                    continue;
                }
                const double v = sample.second;
                const double y = v - comp;
                const double s = t.sum + y;
                comp = (s - t.sum) - y;
                t.sum = s;
                t.sumsq += v * v;
                ++t.n;
            }
            partial[c] = t;
        }
    };

    const int n_threads = resolve_threads(threads);
    if (n_threads <= 1 || n_chunks <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    Tally total;
    for (const Tally& t : partial) {
        total.sum += t.sum;
        total.sumsq += t.sumsq;
        total.n += t.n;
        total.discarded += t.discarded;
    }
    return total;
}

// Runs body(i) for i in [0, n) across threads; body writes to its own output
// slot, so the result is deterministic by construction.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
    constexpr std::size_t kChunk = 64;
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            const std::size_t lo = c * kChunk;
            const std::size_t hi = std::min(n, lo + kChunk);
            for (std::size_t i = lo; i < hi; ++i) body(i);
        }
    };
    const int n_threads = resolve_threads(threads);
    if (n_threads <= 1 || n_chunks <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
}

}  // namespace diffshape
