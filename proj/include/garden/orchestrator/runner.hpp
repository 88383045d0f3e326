#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <type_traits>

#include "garden/orchestrator/orchestrator.hpp"

namespace garden::orchestrator {

// Owns the single worker thread for one orchestrator. Commands queue up and
// run between work units; in Play mode the worker keeps stepping while the
// frontier is non-empty. Readers get snapshots published after each command
// and unit.
class Runner {
public:
    using Hook = std::function<void(const Garden&)>;

    // `after_change` runs on the worker after every command and work unit (e.g. to save the garden).
    explicit Runner(Orchestrator& orchestrator, Hook after_change = {});
    ~Runner();

    Runner(const Runner&) = delete;
    Runner& operator=(const Runner&) = delete;

    void start();
    void stop();

    // Runs `fn(orchestrator)` on the worker and waits for its result; exceptions propagate.
    // The snapshot reflects the command by the time this returns.
    template <typename F>
    auto call(F&& fn) -> std::invoke_result_t<F, Orchestrator&> {
        using R = std::invoke_result_t<F, Orchestrator&>;
        auto promise = std::make_shared<std::promise<R>>();
        auto future = promise->get_future();
        enqueue([this, promise, f = std::forward<F>(fn)]() mutable {
            try {
                if constexpr (std::is_void_v<R>) {
                    f(orch_);
                    publish();
                    promise->set_value();
                } else {
                    R result = f(orch_);
                    publish();
                    promise->set_value(std::move(result));
                }
            } catch (...) {
                publish();
                promise->set_exception(std::current_exception());
            }
        });
        return future.get();
    }

    std::shared_ptr<const Garden> snapshot() const;
    // Last error raised by a Play-mode work unit, if any.
    std::string last_error() const;
    // True while Play mode still has work queued.
    bool playing() const;

private:
    void enqueue(std::function<void()> command);
    void loop();
    void publish();

    Orchestrator& orch_;
    Hook after_change_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<std::function<void()>> queue_;
    bool stopping_ = false;
    bool play_pending_ = false;
    std::string last_error_;
    std::shared_ptr<const Garden> snapshot_;
    std::thread worker_;
};

}  // namespace garden::orchestrator
