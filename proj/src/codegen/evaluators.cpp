#include "garden/codegen/evaluators.hpp"

#include <filesystem>

#include "garden/codegen/extract.hpp"
#include "garden/codegen/layout.hpp"
#include "garden/engine/adapter.hpp"
#include "garden/error.hpp"
#include "garden/prompts.hpp"
#include "garden/util/fs.hpp"
#include "garden/util/text.hpp"

namespace garden::codegen {

namespace {

constexpr std::size_t kLogBudget = 8000;
constexpr std::size_t kExcerptBudget = 1500;

std::string context_block(std::string_view task_prompt, const CodeBundle& bundle, const LayoutSpec* layout) {
    std::string out = "Task:\n" + std::string(task_prompt) + "\n\nCode:\n" + render_bundle(bundle);
    if (layout) out += "\nLayout:\n" + serialize_layout(*layout);
    return out;
}

EvaluationReport interpret(std::string_view output, std::string_view raw_input, SourceStage stage) {
    EvaluationReport report;
    report.source_stage = stage;
    if (auto parsed = parse_verdict(output)) {
        report.verdict = parsed->verdict;
        report.feedback = parsed->feedback;
    } else {
        report.verdict = Verdict::Fail;
        report.feedback = "Evaluator output could not be parsed. Raw excerpt:\n" + text::tail(raw_input, kExcerptBudget);
    }
    if (report.verdict == Verdict::Fail && text::trim(report.feedback).empty()) {
        report.feedback = "Evaluator gave no explanation. Raw excerpt:\n" + text::tail(raw_input, kExcerptBudget);
    }
    return report;
}

EvaluationReport ask(llm::LlmProvider& provider, const char* role, std::string system, std::string user,
                     std::string_view raw_input, SourceStage stage) {
    auto request = llm::make_request(role, std::move(system), std::move(user), llm::kEvaluatorTemperature);
    auto response = provider.complete(request);
    return interpret(response.text, raw_input, stage);
}

}  // namespace

std::string render_bundle(const CodeBundle& bundle) {
    std::string out;
    for (const auto& [path, source] : bundle.files) {
        out += "```cpp\n// FILE: " + path + "\n" + source;
        if (!source.empty() && source.back() != '\n') out += "\n";
        out += "```\n";
    }
    return out;
}

std::string image_mime_for(std::string_view path) {
    auto ext = text::to_lower(std::filesystem::path(path).extension().string());
    if (ext == ".png") return "image/png";
    if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
    if (ext == ".ppm") return "image/x-portable-pixmap";
    if (ext == ".bmp") return "image/bmp";
    return "application/octet-stream";
}

EvaluationReport eval_compile_log(llm::LlmProvider& provider, std::string_view log, const CodeBundle& bundle,
                                  std::string_view task_prompt) {
    auto user = context_block(task_prompt, bundle, nullptr) + "\nCompilation log:\n" + text::tail(log, kLogBudget);
    return ask(provider, llm::roles::kCompileEval, prompts::compile_eval_system(), user, log, SourceStage::Compile);
}

EvaluationReport eval_placement(llm::LlmProvider& provider, std::string_view log_excerpt,
                                const CodeBundle& bundle, const LayoutSpec& layout, std::string_view task_prompt) {
    auto user = context_block(task_prompt, bundle, &layout) + "\nPlacement script log:\n" +
                text::tail(log_excerpt, kLogBudget);
    return ask(provider, llm::roles::kPlacementEval, prompts::placement_eval_system(), user, log_excerpt,
               SourceStage::Placement);
}

EvaluationReport eval_crash_log(llm::LlmProvider& provider, std::string_view crash_log, const CodeBundle& bundle,
                                const LayoutSpec& layout, std::string_view task_prompt) {
    if (text::trim(crash_log).empty()) {
        return {Verdict::Fail, "The simulation crashed; no diagnostic available.", SourceStage::Crash, false};
    }
    auto user = context_block(task_prompt, bundle, &layout) + "\nCrash log:\n" + text::tail(crash_log, kLogBudget);
    return ask(provider, llm::roles::kCrashEval, prompts::crash_eval_system(), user, crash_log, SourceStage::Crash);
}

EvaluationReport eval_visual(llm::LlmProvider& provider, const std::vector<std::string>& screenshots,
                             std::string_view runtime_log, const CodeBundle& bundle, const LayoutSpec& layout,
                             std::string_view task_prompt) {
    if (screenshots.size() != static_cast<std::size_t>(engine::kScreenshotCount)) {
        fail(ErrorCode::PreconditionViolation, "visual evaluation needs " + std::to_string(engine::kScreenshotCount) +
                                                   " screenshots, got " + std::to_string(screenshots.size()));
    }
    auto user = context_block(task_prompt, bundle, &layout) + "\nRuntime log:\n" + text::tail(runtime_log, kLogBudget) +
                "\nThe attached images are frames at t=1s..6s of the simulation, in order.";
    auto request = llm::make_request(llm::roles::kVisualEval, prompts::visual_eval_system(), user,
                                     llm::kEvaluatorTemperature);
    for (const auto& shot : screenshots) {
        request.images.push_back({image_mime_for(shot), fs::read_file(shot)});
    }
    auto response = provider.complete_vision(request);
    return interpret(response.text, runtime_log, SourceStage::Visual);
}

}  // namespace garden::codegen
