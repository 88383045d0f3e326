#include "garden/orchestrator/runner.hpp"

#include "garden/error.hpp"

namespace garden::orchestrator {

Runner::Runner(Orchestrator& orchestrator, Hook after_change)
    : orch_(orchestrator), after_change_(std::move(after_change)) {
    snapshot_ = std::make_shared<const Garden>(orch_.garden());
}

Runner::~Runner() { stop(); }

void Runner::start() {
    std::lock_guard lock(mu_);
    if (worker_.joinable()) return;
    stopping_ = false;
    play_pending_ = orch_.garden().mode() == Mode::Play && !orch_.garden().compute_frontier().empty();
    worker_ = std::thread([this] { loop(); });
}

void Runner::stop() {
    {
        std::lock_guard lock(mu_);
        stopping_ = true;
    }
    cv_.notify_all();
    if (worker_.joinable()) worker_.join();
}

void Runner::enqueue(std::function<void()> command) {
    {
        std::lock_guard lock(mu_);
        if (!worker_.joinable() || stopping_) fail(ErrorCode::PreconditionViolation, "runner is not running");
        queue_.push_back(std::move(command));
    }
    cv_.notify_all();
}

std::shared_ptr<const Garden> Runner::snapshot() const {
    std::lock_guard lock(mu_);
    return snapshot_;
}

std::string Runner::last_error() const {
    std::lock_guard lock(mu_);
    return last_error_;
}

bool Runner::playing() const {
    std::lock_guard lock(mu_);
    return play_pending_;
}

void Runner::publish() {
    const Garden& g = orch_.garden();
    auto snap = std::make_shared<const Garden>(g);
    const bool more = g.mode() == Mode::Play && !g.compute_frontier().empty();
    if (after_change_) after_change_(g);
    std::lock_guard lock(mu_);
    snapshot_ = std::move(snap);
    play_pending_ = more;
}

void Runner::loop() {
    for (;;) {
        std::function<void()> command;
        {
            std::unique_lock lock(mu_);
            cv_.wait(lock, [&] { return stopping_ || !queue_.empty() || play_pending_; });
            if (stopping_) break;
            if (!queue_.empty()) {
                command = std::move(queue_.front());
                queue_.pop_front();
            }
        }
        if (command) {
            command();  // publishes before resolving its caller
            continue;
        }
        try {
            orch_.work_unit();
        } catch (const std::exception& e) {
            // A failing unit would fail again; stop playing until the user intervenes.
            {
                std::lock_guard lock(mu_);
                last_error_ = e.what();
            }
            try {
                orch_.set_mode(Mode::Paused, persistence::Actor::System);
            } catch (const std::exception&) {
            }
        }
        publish();
    }
    // Commands still queued at shutdown are dropped; their futures report broken promises.
    std::lock_guard lock(mu_);
    queue_.clear();
}

}  // namespace garden::orchestrator
