#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garden/core/garden.hpp"
#include "garden/llm/provider.hpp"
#include "garden/planner/plan_parse.hpp"

namespace garden::planner {

// Indented outline of the plan tree, one node per line, leaf markers shown.
// `focus` is tagged `<== EXPAND`. When the outline exceeds `budget` chars,
// fully expanded subtrees off the focus path are collapsed to their root line,
// largest first.
std::string render_plan_tree(const Garden& garden, std::optional<NodeId> focus, std::size_t budget);

struct PlannedChild {
    std::string text;                      // step text without marker
    std::optional<std::string> submodule;  // set for leaves
    bool forced_leaf = false;              // leafed by the depth bound, not by the model

    bool is_leaf() const { return submodule.has_value(); }
};

struct ExpansionResult {
    std::string detail;  // reformulation (seed) or restatement (plan step)
    std::vector<PlannedChild> children;
    int truncated = 0;
};

// Broad planner, sub-planner and task generator over an LLM provider.
class Planner {
public:
    explicit Planner(llm::LlmProvider& provider) : provider_(provider) {}

    PlanParse make_broad_plan(const GardenConfig& config, std::string_view seed_text);

    // Seed nodes go through the broad planner, plan steps through the sub-planner.
    // Children landing on max_depth are forced to leaves; forced leaves lacking a
    // marker get their submodule from one roster-assignment query.
    ExpansionResult expand_plan_node(const Garden& garden, NodeId node_id);

    // Builds the TaskSpec for a leaf. A leaf without an assigned submodule (a
    // user-toggled leaf) first gets one from the roster-assignment query.
    TaskSpec generate_task(const Garden& garden, NodeId leaf_id);

    std::vector<std::string> assign_submodules(const Garden& garden, const std::vector<std::string>& steps);

private:
    // One call plus at most one reprompt; `parse` throws ParseFailure or UnknownSubmodule.
    template <typename Parse>
    auto query_with_reprompt(llm::CompletionRequest request, Parse parse);

    llm::LlmProvider& provider_;
};

}  // namespace garden::planner
