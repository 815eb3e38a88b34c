#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <queue>
#include <thread>
#include <vector>

namespace spikecount {

// Small fixed-size worker pool. Work items are indexed tasks; determinism
// is the caller's contract: each index writes only to its own slot.
class ThreadPool {
  public:
    explicit ThreadPool(unsigned n_threads);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    unsigned size() const { return static_cast<unsigned>(workers_.size()); }

    // Blocks until f(i) has run for every i in [0, count).
    void run_indexed(std::size_t count, const std::function<void(std::size_t)>& f);

  private:
    struct Batch {
        const std::function<void(std::size_t)>* fn = nullptr;
        std::size_t count = 0;
        std::size_t next = 0;
        std::size_t done = 0;
    };

    void worker_loop();

    std::vector<std::thread> workers_;
    std::mutex mu_;
    std::condition_variable cv_work_;
    std::condition_variable cv_done_;
    Batch batch_;
    bool stop_ = false;
};

}  // namespace spikecount
