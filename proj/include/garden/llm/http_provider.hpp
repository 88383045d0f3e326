#pragma once

#include <chrono>
#include <functional>
#include <string>

#include "garden/llm/provider.hpp"

namespace garden::llm {

struct HttpProviderConfig {
    std::string api_base;  // e.g. "https://api.openai.com/v1"
    std::string api_key;
    std::string model = "gpt-4o";
    std::string vision_model;  // falls back to model when empty
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::seconds timeout{120};
    bool vision = true;

    // Reads LLM_API_BASE, LLM_API_KEY, LLM_MODEL and LLM_VISION_MODEL.
    static HttpProviderConfig from_env();
};

// Speaks the OpenAI-compatible chat-completions protocol.
class HttpProvider : public LlmProvider {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    explicit HttpProvider(HttpProviderConfig config, Sleeper sleeper = {});

    bool supports_vision() const override { return config_.vision; }

    // Wire payload for a request; exposed for tests.
    nlohmann::json build_payload(const CompletionRequest& request) const;

protected:
    CompletionResponse do_complete(const CompletionRequest& request) override;

private:
    HttpProviderConfig config_;
    Sleeper sleep_;
};

}  // namespace garden::llm
