#include "garden/codegen/pipeline.hpp"

#include <filesystem>

#include "garden/codegen/evaluators.hpp"
#include "garden/codegen/extract.hpp"
#include "garden/codegen/layout.hpp"
#include "garden/prompts.hpp"
#include "garden/util/fs.hpp"
#include "garden/util/text.hpp"

namespace garden::codegen {

namespace {

void fail_attempt(AttemptResult& r, SourceStage stage, std::string feedback) {
    r.attempt.verdict = Verdict::Fail;
    r.attempt.feedback = feedback;
    r.evaluation = {Verdict::Fail, std::move(feedback), stage, false};
}

void adopt(AttemptResult& r, EvaluationReport report) {
    r.attempt.verdict = report.verdict;
    r.attempt.feedback = report.feedback;
    r.evaluation = std::move(report);
}

std::vector<std::string> asset_lines(const ProjectContext& context) {
    std::vector<std::string> out;
    for (const auto& a : context.assets) out.push_back(a.display_name + ": " + a.mesh_path);
    return out;
}

void materialize(const std::filesystem::path& dir, const CodeBundle& bundle) {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
    for (const auto& [path, source] : bundle.files) fs::write_file(dir / path, source);
}

}  // namespace

std::string layout_file_name(std::string_view task_key, int attempt) {
    return std::string(task_key) + "_" + std::to_string(attempt) + ".json";
}

std::string CodegenPipeline::generation_user_prompt(const AttemptInput& input) const {
    std::string out = "Task:\n" + input.task.full_prompt();
    if (input.prior) {
        const auto& p = *input.prior;
        out += "\n\nAttempt " + std::to_string(p.index) + " failed at the " +
               std::string(to_string(p.source_stage)) + " stage.\n\nPrevious code:\n" + render_bundle(p.bundle);
        if (p.layout) out += "\nPrevious layout:\n" + serialize_layout(*p.layout);
        out += "\nFeedback:\n" + p.feedback + "\n\nFix the problems and output every file again in full.";
    }
    return out;
}

std::optional<LayoutSpec> CodegenPipeline::make_layout(const AttemptInput& input, const CodeBundle& bundle,
                                                       bool procedural_mesh, AttemptResult& result) {
    if (procedural_mesh) {
        auto classes = engine::declared_actor_classes(bundle);
        if (classes.empty()) {
            fail_attempt(result, SourceStage::Placement,
                         "No actor class declaration found; the procedural mesh actor cannot be placed.");
            return std::nullopt;
        }
        return default_layout(classes.front());
    }
    std::string user = "Task:\n" + input.task.full_prompt() + "\n\nCode:\n" + render_bundle(bundle);
    if (!input.context.assets.empty()) {
        user += "\nExisting assets:\n";
        for (const auto& line : asset_lines(input.context)) user += "- " + line + "\n";
    }
    if (input.prior && input.prior->layout) {
        user += "\nPrevious layout:\n" + serialize_layout(*input.prior->layout) + "\nFeedback:\n" +
                input.prior->feedback + "\n";
    }
    try {
        auto response = provider_.complete(llm::make_request(llm::roles::kLayoutGenerator,
                                                             prompts::layout_generator_system(), user));
        return parse_layout(response.text);
    } catch (const Error& e) {
        if (is_script_error(e.code())) throw;
        fail_attempt(result, SourceStage::Placement, std::string("Layout generation failed: ") + e.what());
        return std::nullopt;
    }
}

AttemptResult CodegenPipeline::run_attempt(const AttemptInput& input, bool procedural_mesh) {
    AttemptResult result;
    auto& attempt = result.attempt;
    attempt.index = input.index;
    const auto task_prompt = input.task.full_prompt();

    // Generate.
    try {
        prompts::CodeContext ctx{input.context.starter_content, asset_lines(input.context)};
        auto request = llm::make_request(llm::roles::kCodeGenerator,
                                         prompts::code_generator_system(ctx, procedural_mesh),
                                         generation_user_prompt(input));
        auto response = provider_.complete(request);
        attempt.bundle = parse_code_files(response.text);
        attempt.bundle.summary = text::excerpt(text::trim(response.text.substr(0, response.text.find("```"))), 400);
    } catch (const Error& e) {
        if (is_script_error(e.code())) throw;
        fail_attempt(result, SourceStage::Generation, std::string("Code generation failed: ") + e.what());
        return result;
    }
    attempt.content_hash = attempt.bundle.content_hash();
    attempt.stage_reached = Stage::Generated;

    try {
        // Compile.
        materialize(engine_.workspace().task_source_dir(input.task_key), attempt.bundle);
        auto compiled = engine_.compile_project(attempt.bundle, input.task_key);
        if (!compiled.success) {
            auto report = eval_compile_log(provider_, compiled.log, attempt.bundle, task_prompt);
            if (report.verdict != Verdict::Fail) {
                // The build failed regardless of what the evaluator thinks.
                report.verdict = Verdict::Fail;
                if (text::trim(report.feedback).empty()) report.feedback = text::tail(compiled.log, 1500);
            }
            adopt(result, std::move(report));
            return result;
        }
        attempt.compiled = true;
        attempt.stage_reached = Stage::Compiled;

        // Layout.
        attempt.layout = make_layout(input, attempt.bundle, procedural_mesh, result);
        if (!attempt.layout) return result;
        fs::write_file(engine_.workspace().layouts_dir() / layout_file_name(input.task_key, input.index),
                       serialize_layout(*attempt.layout));

        // Place and run.
        auto run = engine_.run_simulation(*attempt.layout, {input.task_key, input.index});
        run.validate();
        switch (run.outcome) {
            case engine::RunOutcome::PlacementError: {
                auto report = eval_placement(provider_, *run.placement_log_excerpt, attempt.bundle, *attempt.layout,
                                             task_prompt);
                report.verdict = Verdict::Fail;
                if (text::trim(report.feedback).empty()) report.feedback = *run.placement_log_excerpt;
                adopt(result, std::move(report));
                return result;
            }
            case engine::RunOutcome::Crashed: {
                attempt.stage_reached = Stage::Placed;
                auto report = eval_crash_log(provider_, *run.crash_log, attempt.bundle, *attempt.layout, task_prompt);
                report.verdict = Verdict::Fail;
                if (text::trim(report.feedback).empty()) report.feedback = "The simulation crashed.";
                adopt(result, std::move(report));
                return result;
            }
            case engine::RunOutcome::Ran: break;
        }
        attempt.stage_reached = Stage::Ran;
        // Stored workspace-relative so that gardens stay relocatable.
        const auto root = std::filesystem::absolute(engine_.workspace().root).lexically_normal();
        attempt.screenshots.clear();
        for (const auto& shot : run.screenshots) {
            const auto abs = std::filesystem::absolute(shot).lexically_normal();
            auto rel = abs.lexically_relative(root);
            const bool inside = !rel.empty() && *rel.begin() != "..";
            attempt.screenshots.push_back(inside ? rel.generic_string() : abs.string());
        }

        // Visual evaluation.
        auto report = eval_visual(provider_, run.screenshots, run.runtime_log, attempt.bundle, *attempt.layout,
                                  task_prompt);
        attempt.stage_reached = Stage::VisuallyEvaluated;
        adopt(result, std::move(report));
    } catch (const Error& e) {
        if (is_script_error(e.code())) throw;
        SourceStage stage = SourceStage::Compile;
        if (attempt.stage_reached == Stage::Compiled) stage = SourceStage::Placement;
        if (attempt.stage_reached == Stage::Placed) stage = SourceStage::Crash;
        if (attempt.stage_reached >= Stage::Ran) stage = SourceStage::Visual;
        fail_attempt(result, stage, std::string("Attempt aborted: ") + e.what());
    }
    return result;
}

PipelineResult CodegenPipeline::run_loop(const TaskSpec& task, const std::string& task_key,
                                         const ProjectContext& context, int max_attempts, bool procedural_mesh) {
    PipelineResult out;
    AttemptInput input{task, task_key, 1, std::nullopt, context};
    for (int i = 1; i <= max_attempts; ++i) {
        input.index = i;
        auto r = run_attempt(input, procedural_mesh);
        const bool passed = r.evaluation.verdict == Verdict::Pass;
        input.prior = PriorAttempt{i, r.attempt.bundle, r.attempt.layout, r.evaluation.feedback,
                                   r.evaluation.source_stage};
        out.attempts.push_back(std::move(r));
        if (passed) {
            out.passed = true;
            break;
        }
    }
    return out;
}

PipelineResult CodegenPipeline::run_code_task(const TaskSpec& task, const std::string& task_key,
                                              const ProjectContext& context, int max_attempts) {
    return run_loop(task, task_key, context, max_attempts, false);
}

PipelineResult CodegenPipeline::run_procedural_mesh_task(const TaskSpec& task, const std::string& task_key,
                                                         const ProjectContext& context, int max_attempts) {
    return run_loop(task, task_key, context, max_attempts, true);
}

}  // namespace garden::codegen
