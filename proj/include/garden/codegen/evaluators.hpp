#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "garden/core/types.hpp"
#include "garden/llm/provider.hpp"

namespace garden::codegen {

// Stage evaluators. Each issues one provider call and parses the verdict
// line; unparseable output degrades to Fail with an excerpt of the raw input.
// Fail reports always carry non-empty feedback.

EvaluationReport eval_compile_log(llm::LlmProvider& provider, std::string_view log, const CodeBundle& bundle,
                                  std::string_view task_prompt);

EvaluationReport eval_placement(llm::LlmProvider& provider, std::string_view log_excerpt,
                                const CodeBundle& bundle, const LayoutSpec& layout, std::string_view task_prompt);

// An empty crash log yields Fail "no diagnostic available" without a provider call.
EvaluationReport eval_crash_log(llm::LlmProvider& provider, std::string_view crash_log, const CodeBundle& bundle,
                                const LayoutSpec& layout, std::string_view task_prompt);

// Requires exactly six screenshot files; sends them as image parts of one request.
EvaluationReport eval_visual(llm::LlmProvider& provider, const std::vector<std::string>& screenshots,
                             std::string_view runtime_log, const CodeBundle& bundle, const LayoutSpec& layout,
                             std::string_view task_prompt);

// Fenced `// FILE:` blocks, the format the code generator is asked to produce.
std::string render_bundle(const CodeBundle& bundle);

std::string image_mime_for(std::string_view path);

}  // namespace garden::codegen
