#include "spikecount/threadpool.hpp"

#include "spikecount/common.hpp"

namespace spikecount {

ThreadPool::ThreadPool(unsigned n_threads) {
    if (n_threads == 0) n_threads = 1;
    workers_.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) {
        workers_.emplace_back([this] { worker_loop(); });
    }
}

ThreadPool::~ThreadPool() {
    {
        std::unique_lock lk(mu_);
        stop_ = true;
    }
    cv_work_.notify_all();
    for (auto& w : workers_) w.join();
}

void ThreadPool::worker_loop() {
    for (;;) {
        std::size_t idx;
        const std::function<void(std::size_t)>* fn;
        {
            std::unique_lock lk(mu_);
            cv_work_.wait(lk, [this] { return stop_ || (batch_.fn && batch_.next < batch_.count); });
            if (stop_) return;
            idx = batch_.next++;
            fn = batch_.fn;
        }
        (*fn)(idx);
        {
            std::unique_lock lk(mu_);
            if (++batch_.done == batch_.count) cv_done_.notify_all();
        }
    }
}

void ThreadPool::run_indexed(std::size_t count, const std::function<void(std::size_t)>& f) {
    if (count == 0) return;
    {
        std::unique_lock lk(mu_);
        batch_.fn = &f;
        batch_.count = count;
        batch_.next = 0;
        batch_.done = 0;
    }
    cv_work_.notify_all();
    {
        std::unique_lock lk(mu_);
        cv_done_.wait(lk, [this] { return batch_.done == batch_.count; });
        batch_.fn = nullptr;
    }
}

void parallel_for(ThreadPool* pool, std::size_t count, const std::function<void(std::size_t)>& f) {
    if (pool == nullptr || pool->size() <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    pool->run_indexed(count, f);
}

}  // namespace spikecount
