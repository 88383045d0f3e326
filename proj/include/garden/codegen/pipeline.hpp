#pragma once

#include <optional>
#include <string>
#include <vector>

#include "garden/core/types.hpp"
#include "garden/engine/adapter.hpp"
#include "garden/error.hpp"
#include "garden/llm/provider.hpp"

namespace garden::codegen {

struct ProjectContext {
    std::vector<std::string> starter_content;
    std::vector<AssetRecord> assets;  // registered by earlier tasks
};

// What the next attempt is shown about the previous one.
struct PriorAttempt {
    int index = 0;
    CodeBundle bundle;
    std::optional<LayoutSpec> layout;
    std::string feedback;
    SourceStage source_stage = SourceStage::Compile;
};

struct AttemptInput {
    TaskSpec task;
    std::string task_key;  // directory name under source/, layouts/, screenshots/
    int index = 1;
    std::optional<PriorAttempt> prior;
    ProjectContext context;
};

struct AttemptResult {
    PipelineAttempt attempt;
    EvaluationReport evaluation;
};

struct PipelineResult {
    bool passed = false;
    std::vector<AttemptResult> attempts;
};

std::string layout_file_name(std::string_view task_key, int attempt);

// generate -> compile -> layout -> place -> run -> visual evaluation.
class CodegenPipeline {
public:
    CodegenPipeline(llm::LlmProvider& provider, engine::EngineAdapter& engine)
        : provider_(provider), engine_(engine) {}

    // One pass through the state machine. Never throws for provider or engine
    // failures; those come back as a Fail with diagnostic feedback.
    AttemptResult run_attempt(const AttemptInput& input, bool procedural_mesh);

    PipelineResult run_code_task(const TaskSpec& task, const std::string& task_key, const ProjectContext& context,
                                 int max_attempts);
    // Same loop with the procedural exemplar and a fixed origin layout.
    PipelineResult run_procedural_mesh_task(const TaskSpec& task, const std::string& task_key,
                                            const ProjectContext& context, int max_attempts);

    std::string generation_user_prompt(const AttemptInput& input) const;

private:
    PipelineResult run_loop(const TaskSpec& task, const std::string& task_key, const ProjectContext& context,
                            int max_attempts, bool procedural_mesh);
    std::optional<LayoutSpec> make_layout(const AttemptInput& input, const CodeBundle& bundle,
                                          bool procedural_mesh, AttemptResult& result);

    llm::LlmProvider& provider_;
    engine::EngineAdapter& engine_;
};

}  // namespace garden::codegen
