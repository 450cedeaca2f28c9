#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace s25 {

/// Fixed set of workers executing index ranges. parallel_for returns only
/// after every index has run, which is the barrier between time steps.
class WorkerPool {
public:
    explicit WorkerPool(int workers);
    ~WorkerPool();
    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    int size() const { return size_; }

    /// Calls fn(index, worker) for index in [0, count). Indices are claimed
    /// dynamically; worker is in [0, size()).
    void parallel_for(std::size_t count, const std::function<void(std::size_t, int)>& fn);

private:
    void worker_loop(int id);
    void drain(int id);

    int size_;
    std::vector<std::thread> threads_;
    std::mutex mu_;
    std::condition_variable start_cv_, done_cv_;
    const std::function<void(std::size_t, int)>* job_ = nullptr;
    std::size_t count_ = 0;
    std::atomic<std::size_t> next_{0};
    std::uint64_t generation_ = 0;
    int active_ = 0;
    bool stop_ = false;
};

}  // namespace s25
