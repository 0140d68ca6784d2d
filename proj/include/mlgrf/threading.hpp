#ifndef MLGRF_THREADING_HPP
#define MLGRF_THREADING_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace mlgrf
{

/**
   Runs fn(i) for i in [begin, end) on up to `threads` workers. Work items
   are claimed from a shared counter; callers must make fn(i) independent
   of execution order (keyed RNG, disjoint output slots). The first
   exception thrown by any worker is rethrown after all workers join.
*/
inline void parallel_for(long long begin, long long end, int threads,
                         const std::function<void(long long)>& fn)
{
    if (end <= begin)
        return;
    const long long count = end - begin;
    if (threads <= 1 || count == 1)
    {
        for (long long i = begin; i < end; ++i)
            fn(i);
        return;
    }

    const int workers = static_cast<int>(std::min<long long>(threads, count));
    std::atomic<long long> next{begin};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]
        {
            for (;;)
            {
                const long long i = next.fetch_add(1);
                if (i >= end || failed.load(std::memory_order_relaxed))
                    return;
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    if (!failed.exchange(true))
                        error = std::current_exception();
                    return;
                }
            }
        });
    for (std::thread& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace mlgrf

#endif
