#include "garden/llm/http_provider.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "garden/error.hpp"
#include "garden/util/url.hpp"

namespace garden::llm {

namespace {

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : std::move(fallback);
}

}  // namespace

HttpProviderConfig HttpProviderConfig::from_env() {
    HttpProviderConfig c;
    c.api_base = env_or("LLM_API_BASE", "https://api.openai.com/v1");
    c.api_key = env_or("LLM_API_KEY", "");
    c.model = env_or("LLM_MODEL", c.model);
    c.vision_model = env_or("LLM_VISION_MODEL", "");
    return c;
}

HttpProvider::HttpProvider(HttpProviderConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleep_(std::move(sleeper)) {
    if (config_.api_base.empty()) fail(ErrorCode::InvalidConfig, "LLM api base is empty");
    if (!sleep_) sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

nlohmann::json HttpProvider::build_payload(const CompletionRequest& request) const {
    using nlohmann::json;
    json messages = json::array();
    if (!request.system_prompt.empty()) messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
    for (std::size_t i = 0; i < request.messages.size(); ++i) {
        const auto& m = request.messages[i];
        const bool attach = !request.images.empty() && i + 1 == request.messages.size();
        if (!attach) {
            messages.push_back({{"role", m.role}, {"content", m.text}});
            continue;
        }
        json parts = json::array();
        parts.push_back({{"type", "text"}, {"text", m.text}});
        for (const auto& img : request.images) {
            parts.push_back({{"type", "image_url"},
                             {"image_url",
                              {{"url", "data:" + img.mime + ";base64," + httplib::detail::base64_encode(img.bytes)}}}});
        }
        messages.push_back({{"role", m.role}, {"content", parts}});
    }
    const std::string& model =
        !request.images.empty() && !config_.vision_model.empty() ? config_.vision_model : config_.model;
    return {{"model", model},
            {"messages", messages},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens}};
}

CompletionResponse HttpProvider::do_complete(const CompletionRequest& request) {
    const auto base = split_base_url(config_.api_base);
    const std::string body = build_payload(request).dump();

    httplib::Client client(base.scheme_host_port);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    std::string last_error;
    auto backoff = config_.initial_backoff;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            sleep_(backoff);
            backoff *= 2;
        }
        const auto started = std::chrono::steady_clock::now();
        auto res = client.Post(base.path_prefix + "/chat/completions", headers, body, "application/json");
        if (!res) {
            last_error = "transport: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403) {
            fail(ErrorCode::AuthError, "HTTP " + std::to_string(res->status));
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            fail(ErrorCode::TransportError, "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 500));
        }

        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::TransportError, std::string("malformed completion body: ") + e.what());
        }
        if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) {
            fail(ErrorCode::ProviderRefusal, "completion without choices");
        }
        const auto& choice = doc["choices"][0];
        const std::string finish = choice.value("finish_reason", std::string());
        std::string text;
        if (choice.contains("message") && choice["message"].contains("content") &&
            choice["message"]["content"].is_string()) {
            text = choice["message"]["content"].get<std::string>();
        }
        if (finish == "content_filter") fail(ErrorCode::ProviderRefusal, "blocked by content filter");

        CompletionResponse out;
        out.text = std::move(text);
        out.truncated = finish == "length";
        out.provider_meta = {
            {"provider", "http"},
            {"attempts", attempt + 1},
            {"latency_ms",
             std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count()},
        };
        if (doc.contains("usage")) out.provider_meta["usage"] = doc["usage"];
        return out;
    }
    fail(ErrorCode::TransportError,
         last_error + " after " + std::to_string(config_.max_retries + 1) + " attempts");
}

}  // namespace garden::llm
