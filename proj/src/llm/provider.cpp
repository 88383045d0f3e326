#include "garden/llm/provider.hpp"

#include "garden/error.hpp"
#include "garden/util/hash.hpp"

namespace garden::llm {

std::string CompletionRequest::prompt_hash() const {
    Fnv1a h;
    h.field(system_prompt);
    for (const auto& m : messages) h.field(m.role).field(m.text);
    return h.hex();
}

std::string CompletionRequest::transcript() const {
    std::string out = system_prompt;
    for (const auto& m : messages) {
        out += "\n";
        out += m.text;
    }
    return out;
}

CompletionResponse LlmProvider::complete(const CompletionRequest& request) {
    if (request.messages.empty()) fail(ErrorCode::PreconditionViolation, "completion request has no messages");
    if (request.temperature < 0) fail(ErrorCode::PreconditionViolation, "temperature must be >= 0");
    if (request.max_tokens <= 0) fail(ErrorCode::PreconditionViolation, "max_tokens must be positive");
    if (!request.images.empty() && !supports_vision()) {
        fail(ErrorCode::NoVisionCapability, "provider cannot accept images");
    }
    auto response = do_complete(request);
    if (response.text.empty() && !response.truncated) {
        fail(ErrorCode::ProviderRefusal, "empty completion for " + request.role_tag);
    }
    return response;
}

CompletionResponse LlmProvider::complete_vision(const CompletionRequest& request) {
    if (request.images.empty()) fail(ErrorCode::PreconditionViolation, "vision request without images");
    if (!supports_vision()) fail(ErrorCode::NoVisionCapability, "provider cannot accept images");
    return complete(request);
}

CompletionRequest make_request(std::string role_tag, std::string system_prompt, std::string user_text,
                               double temperature) {
    CompletionRequest r;
    r.role_tag = std::move(role_tag);
    r.system_prompt = std::move(system_prompt);
    r.messages.push_back({"user", std::move(user_text)});
    r.temperature = temperature;
    return r;
}

}  // namespace garden::llm
