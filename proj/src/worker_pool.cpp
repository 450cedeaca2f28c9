#include "s25/worker_pool.hpp"

#include <exception>

#include "s25/errors.hpp"

namespace s25 {

WorkerPool::WorkerPool(int workers) : size_(workers) {
    if (workers < 1) throw ConfigError("worker count must be >= 1");
    // The calling thread acts as worker 0.
    for (int id = 1; id < workers; ++id) threads_.emplace_back([this, id] { worker_loop(id); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lk(mu_);
        stop_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) t.join();
}

void WorkerPool::drain(int id) {
    for (;;) {
        const std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
        if (i >= count_) return;
        (*job_)(i, id);
    }
}

void WorkerPool::worker_loop(int id) {
    std::uint64_t seen = 0;
    for (;;) {
        {
            std::unique_lock lk(mu_);
            start_cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
        }
        drain(id);
        {
            std::lock_guard lk(mu_);
            if (--active_ == 0) done_cv_.notify_one();
        }
    }
}

void WorkerPool::parallel_for(std::size_t count, const std::function<void(std::size_t, int)>& fn) {
    if (count == 0) return;
    if (size_ == 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i, 0);
        return;
    }
    // Exceptions from workers are captured and rethrown on the caller.
    std::exception_ptr error;
    std::mutex error_mu;
    const std::function<void(std::size_t, int)> guarded = [&](std::size_t i, int w) {
        try {
            fn(i, w);
        } catch (...) {
            std::lock_guard lk(error_mu);
            if (!error) error = std::current_exception();
        }
    };
    {
        std::lock_guard lk(mu_);
        job_ = &guarded;
        count_ = count;
        next_.store(0, std::memory_order_relaxed);
        active_ = size_ - 1;
        ++generation_;
    }
    start_cv_.notify_all();
    drain(0);
    {
        std::unique_lock lk(mu_);
        done_cv_.wait(lk, [&] { return active_ == 0; });
        job_ = nullptr;
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace s25
