// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace armt {

/// Fixed-size worker pool with a blocking parallel_for. Which worker runs an
/// index is unspecified; callers must make results independent of it.
class ThreadPool {
public:
    using Task = std::function<void(std::size_t index, std::size_t worker)>;

    /// A pool of 0 or 1 workers runs everything inline on the caller.
    explicit ThreadPool(std::size_t workers);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    std::size_t size() const { return std::max<std::size_t>(threads_.size(), 1); }

    /// Runs task(i, worker) for i in [0, count) and returns when all are done.
    /// The first exception thrown by a task is rethrown here.
    void parallel_for(std::size_t count, const Task& task);

private:
    void worker_loop(std::size_t worker);

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    const Task* task_ = nullptr;
    std::size_t count_ = 0;
    std::size_t next_ = 0;
    std::size_t pending_ = 0;
    std::size_t generation_ = 0;
    bool stop_ = false;
    std::exception_ptr error_;
};

/// Worker count from ARMT_THREADS when set and valid, else `fallback`.
std::size_t threads_from_env(std::size_t fallback);

}  // namespace armt
