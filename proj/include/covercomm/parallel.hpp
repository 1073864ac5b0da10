#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>

namespace covercomm {

enum class Kernel { Serial, Parallel };

struct SearchOptions {
    Kernel kernel = Kernel::Parallel;
    int threads = 1;
};

/// COVERCOMM_THREADS if set to a positive integer, else 1.
int threads_from_environment();

/// Least i < n with pred(i), scanning in order.
template <class Pred>
std::optional<std::size_t> first_match_serial(std::size_t n, Pred&& pred)
{
    for (std::size_t i = 0; i < n; ++i)
        if (pred(i))
            return i;
    return std::nullopt;
}

/// Same answer as first_match_serial; pred must be thread-safe and must not throw.
template <class Pred>
std::optional<std::size_t> first_match_parallel(std::size_t n, Pred&& pred, int threads)
{
    std::atomic<std::size_t> best{n};
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads > 0 ? threads : 1)
    for (std::int64_t i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (k >= best.load(std::memory_order_relaxed))
            continue;
        if (pred(k)) {
            std::size_t current = best.load(std::memory_order_relaxed);
            while (k < current && !best.compare_exchange_weak(current, k, std::memory_order_relaxed)) {
            }
        }
    }
    const std::size_t found = best.load();
    if (found == n)
        return std::nullopt;
    return found;
}

template <class Pred>
std::optional<std::size_t> first_match(std::size_t n, Pred&& pred, const SearchOptions& options)
{
    if (options.kernel == Kernel::Serial)
        return first_match_serial(n, pred);
    return first_match_parallel(n, pred, options.threads);
}

/// Calls f(i) for every i < n; f must be thread-safe and must not throw.
template <class F>
void parallel_for(std::size_t n, F&& f, const SearchOptions& options)
{
    if (options.kernel == Kernel::Serial) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 64) num_threads(options.threads > 0 ? options.threads : 1)
    for (std::int64_t i = 0; i < count; ++i)
        f(static_cast<std::size_t>(i));
}

} // namespace covercomm
