#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dasis
{

inline int resolveThreads(int requested)
{
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, count). Work is handed out dynamically, so body must
// not depend on which thread runs it. The first exception is rethrown.
template <class Body>
void parallelFor(std::size_t count, int threads, Body &&body)
{
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(resolveThreads(threads)), count);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failureMutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
        {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++)
                {
                    try
                    {
                        body(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(failureMutex);
                        if (!failure)
                            failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace dasis
