#pragma once

#include <cstdlib>
#include <functional>
#include <future>
#include <thread>
#include <vector>

namespace membrane {

// Worker-thread count: MEMBRANE_THREADS env var, else available parallelism.
inline int worker_threads() {
    if (const char* env = std::getenv("MEMBRANE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

namespace detail {
constexpr std::size_t kReduceBlock = 4096;

inline double pairwise_combine(std::vector<double>& partials) {
    // fixed-shape binary tree over block index, independent of thread count
    std::size_t n = partials.size();
    if (n == 0) return 0.0;
    while (n > 1) {
        std::size_t m = 0;
        for (std::size_t i = 0; i + 1 < n; i += 2)
            partials[m++] = partials[i] + partials[i + 1];
        if (n % 2) partials[m++] = partials[n - 1];
        n = m;
    }
    return partials[0];
}
}  // namespace detail

// Sum f(i) for i in [0, count). Items are grouped into fixed-size blocks that
// are summed left to right, then combined with a pairwise tree keyed to block
// index; the result is bitwise identical for any thread count.
template <class F>
double deterministic_sum(std::size_t count, F&& f) {
    const std::size_t nblocks = (count + detail::kReduceBlock - 1) / detail::kReduceBlock;
    std::vector<double> partials(nblocks, 0.0);
    auto run = [&](std::size_t b0, std::size_t b1) {
        for (std::size_t b = b0; b < b1; ++b) {
            const std::size_t lo = b * detail::kReduceBlock;
            const std::size_t hi = std::min(count, lo + detail::kReduceBlock);
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += f(i);
            partials[b] = s;
        }
    };
    const int nt = worker_threads();
    if (nt <= 1 || nblocks <= 1) {
        run(0, nblocks);
    } else {
        const std::size_t per = (nblocks + nt - 1) / nt;
        std::vector<std::future<void>> tasks;
        for (std::size_t b0 = 0; b0 < nblocks; b0 += per)
            tasks.push_back(std::async(std::launch::async, run, b0,
                                       std::min(nblocks, b0 + per)));
        for (auto& t : tasks) t.get();
    }
    return detail::pairwise_combine(partials);
}

// Parallel loop over [0, count); each index is visited exactly once.
template <class F>
void parallel_for(std::size_t count, F&& f) {
    const int nt = worker_threads();
    if (nt <= 1 || count < 1024) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    const std::size_t per = (count + nt - 1) / nt;
    std::vector<std::future<void>> tasks;
    for (std::size_t lo = 0; lo < count; lo += per) {
        const std::size_t hi = std::min(count, lo + per);
        tasks.push_back(std::async(std::launch::async, [&f, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        }));
    }
    for (auto& t : tasks) t.get();
}

}  // namespace membrane
