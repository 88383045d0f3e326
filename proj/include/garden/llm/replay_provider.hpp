#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "garden/llm/provider.hpp"

namespace garden::llm {

struct CapturedRequest {
    CompletionRequest request;
    std::string response;
};

// Deterministic scripted provider. Responses are queued per role tag and
// consumed FIFO; every request is captured for inspection.
//
// Script directory format: one file per response, named `<ordinal>-<role>.txt`
// and consumed in lexicographic filename order within each role. A first line
// `#! images=<n>` pins the number of images the matching request must carry.
class ReplayProvider : public LlmProvider {
public:
    struct Entry {
        std::string text;
        std::optional<int> expected_images;
    };

    ReplayProvider() = default;
    static ReplayProvider from_directory(const std::filesystem::path& dir);

    ReplayProvider(const ReplayProvider&) = delete;
    ReplayProvider& operator=(const ReplayProvider&) = delete;
    ReplayProvider(ReplayProvider&& other) noexcept;

    void push(const std::string& role, std::string text, std::optional<int> expected_images = std::nullopt);
    // Keyed entries take precedence over the FIFO queue when a request's
    // (prompt hash, image count) matches.
    void push_keyed(const std::string& prompt_hash, int image_count, std::string text);
    // Drops the first n scripted responses for a role (resuming a partly consumed script).
    void skip(const std::string& role, std::size_t n);

    // FIFO entries used or skipped so far, per role.
    std::map<std::string, std::size_t> consumed() const;
    std::size_t remaining(const std::string& role) const;
    std::size_t remaining_total() const;
    std::vector<CapturedRequest> captured() const;
    std::vector<CapturedRequest> captured(const std::string& role) const;

    void set_vision(bool enabled) { vision_ = enabled; }
    bool supports_vision() const override { return vision_; }

protected:
    CompletionResponse do_complete(const CompletionRequest& request) override;

private:
    mutable std::mutex mu_;
    std::map<std::string, std::deque<Entry>> queues_;
    std::map<std::pair<std::string, int>, std::deque<std::string>> keyed_;
    std::vector<CapturedRequest> captured_;
    std::map<std::string, std::size_t> consumed_;
    bool vision_ = true;
};

}  // namespace garden::llm
