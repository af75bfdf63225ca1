// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/tensor/thread_pool.hpp"

#include <cstdlib>
#include <string>
#include <utility>

namespace armt {

ThreadPool::ThreadPool(std::size_t workers) {
    if (workers <= 1) {
        return;
    }
    threads_.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads_.emplace_back([this, w] { worker_loop(w); });
    }
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) {
        t.join();
    }
}

void ThreadPool::parallel_for(std::size_t count, const Task& task) {
    if (count == 0) {
        return;
    }
    if (threads_.empty()) {
        for (std::size_t i = 0; i < count; ++i) {
            task(i, 0);
        }
        return;
    }
    std::unique_lock lock(mutex_);
    task_ = &task;
    count_ = count;
    next_ = 0;
    pending_ = count;
    error_ = nullptr;
    ++generation_;
    wake_.notify_all();
    done_.wait(lock, [this] { return pending_ == 0; });
    task_ = nullptr;
    if (error_) {
        std::rethrow_exception(std::exchange(error_, nullptr));
    }
}

void ThreadPool::worker_loop(std::size_t worker) {
    std::size_t seen = 0;
    std::unique_lock lock(mutex_);
    for (;;) {
        wake_.wait(lock, [&] { return stop_ || (generation_ != seen && next_ < count_); });
        if (stop_) {
            return;
        }
        seen = generation_;
        while (next_ < count_) {
            const std::size_t index = next_++;
            const Task* task = task_;
            lock.unlock();
            try {
                (*task)(index, worker);
            } catch (...) {
                lock.lock();
                if (!error_) error_ = std::current_exception();
                lock.unlock();
            }
            lock.lock();
            if (--pending_ == 0) {
                done_.notify_one();
            }
        }
    }
}

std::size_t threads_from_env(std::size_t fallback) {
    if (const char* env = std::getenv("ARMT_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return fallback;
}

}  // namespace armt
