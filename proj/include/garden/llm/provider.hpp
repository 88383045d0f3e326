#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace garden::llm {

// Role tags identify which component issued a request. Replay scripts are
// matched per tag.
namespace roles {
inline constexpr const char* kBroadPlanner = "broad_planner";
inline constexpr const char* kSubPlanner = "sub_planner";
inline constexpr const char* kRosterAssign = "roster_assign";
inline constexpr const char* kTaskGenerator = "task_generator";
inline constexpr const char* kCodeGenerator = "code_generator";
inline constexpr const char* kLayoutGenerator = "layout_generator";
inline constexpr const char* kCompileEval = "compile_eval";
inline constexpr const char* kPlacementEval = "placement_eval";
inline constexpr const char* kCrashEval = "crash_eval";
inline constexpr const char* kVisualEval = "visual_eval";
}  // namespace roles

inline constexpr double kGenerationTemperature = 0.7;
inline constexpr double kEvaluatorTemperature = 0.0;

struct ChatMessage {
    std::string role;  // "user" or "assistant"
    std::string text;
};

struct ImageBlob {
    std::string mime = "image/png";
    std::string bytes;
};

struct CompletionRequest {
    std::string role_tag;
    std::string system_prompt;
    std::vector<ChatMessage> messages;
    std::vector<ImageBlob> images;
    double temperature = kGenerationTemperature;
    int max_tokens = 4096;

    // Fingerprint of system prompt and messages; images are not included.
    std::string prompt_hash() const;
    // Concatenation of all message texts, for inspection in tests and logs.
    std::string transcript() const;
};

struct CompletionResponse {
    std::string text;
    nlohmann::json provider_meta = nlohmann::json::object();
    bool truncated = false;
};

class LlmProvider {
public:
    virtual ~LlmProvider() = default;

    // Validates the request, then delegates to the backend.
    CompletionResponse complete(const CompletionRequest& request);
    // As complete(), but requires at least one image.
    CompletionResponse complete_vision(const CompletionRequest& request);

    virtual bool supports_vision() const = 0;

protected:
    virtual CompletionResponse do_complete(const CompletionRequest& request) = 0;
};

CompletionRequest make_request(std::string role_tag, std::string system_prompt, std::string user_text,
                               double temperature = kGenerationTemperature);

}  // namespace garden::llm
