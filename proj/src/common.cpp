#include "surfch/common.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace surfch {

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int count)
{
    if (count < 1)
        throw std::invalid_argument("set_threads: count must be >= 1");
    g_threads.store(count);
}

int thread_count()
{
    return g_threads.load();
}

void parallel_for_chunks(std::size_t count,
                         const std::function<void(std::size_t, std::size_t)>& body)
{
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(thread_count()), std::max<std::size_t>(count, 1));
    if (workers <= 1 || count == 0) {
        body(0, count);
        return;
    }

    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t begin = std::min(w * chunk, count);
        const std::size_t end = std::min(begin + chunk, count);
        if (begin < end)
            pool.emplace_back(body, begin, end);
    }
    body(0, std::min(chunk, count));
    for (auto& t : pool)
        t.join();
}

} // namespace surfch
