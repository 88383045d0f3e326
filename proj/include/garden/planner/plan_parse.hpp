#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garden/core/types.hpp"

namespace garden::planner {

struct PlanParse {
    std::string reformulation;
    std::vector<std::string> steps;
    // Number of steps dropped to honour max_branching.
    int truncated = 0;
};

struct LeafMarker {
    std::string submodule;

    friend bool operator==(const LeafMarker&, const LeafMarker&) = default;
};

// Parses an optional `OUTLINE:` / `DETAIL:` header followed by a numbered
// list. Throws ParseFailure when no numbered step is found.
PlanParse parse_plan_response(std::string_view response);

// Recognises a trailing `[LEAF: <name>]`. Names are matched against the
// roster case-insensitively; unknown names throw UnknownSubmodule.
std::optional<LeafMarker> parse_leaf_marker(std::string_view step_text, const GardenConfig& config);
std::string strip_leaf_marker(std::string_view step_text);
std::string render_leaf_marker(std::string_view step_text, std::string_view submodule);

// Splits a task-generator response into the named sections of the executor's
// prompt schema. Throws ParseFailure when a required section is missing.
std::map<std::string, std::string> parse_task_sections(std::string_view response, Executor executor);

// Parses `<n>. <submodule>` lines for `count` steps; throws ParseFailure or
// UnknownSubmodule.
std::vector<std::string> parse_roster_assignment(std::string_view response, std::size_t count,
                                                 const GardenConfig& config);

}  // namespace garden::planner
