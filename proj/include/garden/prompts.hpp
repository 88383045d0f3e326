#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "garden/core/types.hpp"

// Prompt templates for every model-facing role. Bump kPromptVersion whenever
// wording changes so that recorded runs can be matched to the prompts that
// produced them.
namespace garden::prompts {

inline constexpr std::string_view kPromptVersion = "v1";

std::string roster_listing(const std::vector<SubmoduleDescriptor>& roster);

// Planner
std::string broad_planner_system(const GardenConfig& config);
std::string sub_planner_system(const GardenConfig& config);
std::string broad_planner_user(std::string_view seed);
std::string sub_planner_user(std::string_view plan_outline, int node_depth, const GardenConfig& config);
std::string roster_assign_system(const GardenConfig& config);
std::string roster_assign_user(std::string_view plan_outline, const std::vector<std::string>& steps);
std::string reprompt_after_parse_failure(std::string_view reason);

// Task generator
std::string task_generator_system(const SubmoduleDescriptor& submodule);
std::string task_generator_user(std::string_view plan_outline, std::string_view leaf_text,
                                const SubmoduleDescriptor& submodule);

// Code generator and evaluators
struct CodeContext {
    std::vector<std::string> starter_content;
    std::vector<std::string> generated_assets;  // display name + path lines
};

std::string code_generator_system(const CodeContext& context, bool procedural_mesh);
std::string layout_generator_system();
std::string compile_eval_system();
std::string placement_eval_system();
std::string crash_eval_system();
std::string visual_eval_system();
std::string procedural_cube_exemplar();

// Asset generation
std::string mesh_prompt_augmentation();

}  // namespace garden::prompts
