#include "garden/planner/planner.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "garden/error.hpp"
#include "garden/prompts.hpp"
#include "garden/util/text.hpp"

namespace garden::planner {

namespace {

struct RenderState {
    const Garden& garden;
    std::optional<NodeId> focus;
    const std::set<NodeId>& collapsed;
};

std::vector<NodeId> plan_children(const Garden& g, NodeId id) {
    std::vector<NodeId> out;
    for (NodeId c : g.children(id)) {
        if (g.node(c).kind == NodeKind::PlanStep) out.push_back(c);
    }
    return out;
}

std::size_t count_plan_descendants(const Garden& g, NodeId id) {
    std::size_t n = 0;
    for (NodeId c : plan_children(g, id)) n += 1 + count_plan_descendants(g, c);
    return n;
}

void render_node(const RenderState& st, NodeId id, const std::string& path, int depth, std::string& out) {
    const GardenNode& n = st.garden.node(id);
    std::string line(static_cast<std::size_t>(depth) * 2, ' ');
    if (n.kind == NodeKind::Seed) {
        line += "* " + text::trim(n.text);
        if (const auto* d = std::get_if<PlanDetail>(&n.payload); d && !d->detail.empty()) {
            line += "  (outline: " + d->detail + ")";
        }
    } else {
        line += path + " " + text::trim(n.text);
        if (n.is_leaf) line += " [LEAF: " + n.assigned_submodule.value_or("unassigned") + "]";
    }
    if (st.focus == id) line += "  <== EXPAND";
    auto kids = plan_children(st.garden, id);
    if (st.collapsed.count(id) && !kids.empty()) {
        line += "  (" + std::to_string(count_plan_descendants(st.garden, id)) + " sub-steps collapsed)";
        out += line + "\n";
        return;
    }
    out += line + "\n";
    for (std::size_t i = 0; i < kids.size(); ++i) {
        std::string child_path = path.empty() ? std::to_string(i + 1) + "." : path + std::to_string(i + 1) + ".";
        render_node(st, kids[i], child_path, depth + 1, out);
    }
}

bool fully_expanded(const Garden& g, NodeId id) {
    const GardenNode& n = g.node(id);
    auto kids = plan_children(g, id);
    if (!n.is_leaf && kids.empty()) return false;
    return std::all_of(kids.begin(), kids.end(), [&](NodeId c) { return fully_expanded(g, c); });
}

bool is_recoverable(const Error& e) {
    return e.code() == ErrorCode::ParseFailure || e.code() == ErrorCode::UnknownSubmodule;
}

void validate_markers(const PlanParse& parse, const GardenConfig& config) {
    for (const auto& s : parse.steps) parse_leaf_marker(s, config);
}

}  // namespace

std::string render_plan_tree(const Garden& garden, std::optional<NodeId> focus, std::size_t budget) {
    if (!garden.root()) return {};
    std::set<NodeId> collapsed;
    auto render = [&] {
        std::string out;
        render_node(RenderState{garden, focus, collapsed}, *garden.root(), "", 0, out);
        return out;
    };
    std::string out = render();
    if (out.size() <= budget) return out;

    std::set<NodeId> focus_path;
    if (focus && garden.contains(*focus)) {
        for (std::optional<NodeId> cur = *focus; cur; cur = garden.node(*cur).parent) focus_path.insert(*cur);
    }
    struct Candidate {
        std::size_t weight;
        NodeId id;
    };
    std::vector<Candidate> candidates;
    for (const auto& [id, n] : garden.nodes()) {
        if (n.kind != NodeKind::PlanStep || focus_path.count(id)) continue;
        if (plan_children(garden, id).empty() || !fully_expanded(garden, id)) continue;
        candidates.push_back({count_plan_descendants(garden, id), id});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.id < b.id;
    });
    for (const auto& c : candidates) {
        collapsed.insert(c.id);
        out = render();
        if (out.size() <= budget) break;
    }
    return out;
}

template <typename Parse>
auto Planner::query_with_reprompt(llm::CompletionRequest request, Parse parse) {
    auto first = provider_.complete(request);
    try {
        return parse(first.text);
    } catch (const Error& e) {
        if (!is_recoverable(e)) throw;
        request.messages.push_back({"assistant", first.text});
        request.messages.push_back({"user", prompts::reprompt_after_parse_failure(e.what())});
    }
    auto second = provider_.complete(request);
    try {
        return parse(second.text);
    } catch (const Error& e) {
        if (!is_recoverable(e)) throw;
        fail(ErrorCode::ParseFailure, std::string("after reprompt: ") + e.what());
    }
}

PlanParse Planner::make_broad_plan(const GardenConfig& config, std::string_view seed_text) {
    if (text::trim(seed_text).empty()) fail(ErrorCode::EmptyText, "seed text is empty");
    auto request = llm::make_request(llm::roles::kBroadPlanner, prompts::broad_planner_system(config),
                                     prompts::broad_planner_user(seed_text));
    auto parse = query_with_reprompt(request, [&](const std::string& response) {
        auto p = parse_plan_response(response);
        validate_markers(p, config);
        return p;
    });
    const auto limit = static_cast<std::size_t>(config.max_branching);
    if (parse.steps.size() > limit) {
        parse.truncated = static_cast<int>(parse.steps.size() - limit);
        parse.steps.resize(limit);
    }
    return parse;
}

ExpansionResult Planner::expand_plan_node(const Garden& garden, NodeId node_id) {
    const GardenNode& n = garden.node(node_id);
    const GardenConfig& config = garden.config();
    if (n.kind != NodeKind::Seed && n.kind != NodeKind::PlanStep) {
        fail(ErrorCode::PreconditionViolation, "only Seed and PlanStep nodes expand");
    }
    if (n.is_leaf) fail(ErrorCode::PreconditionViolation, "node " + to_string(node_id) + " is a leaf");
    if (!garden.children(node_id).empty()) {
        fail(ErrorCode::PreconditionViolation, "node " + to_string(node_id) + " already has children");
    }
    if (n.status != NodeStatus::Pending) fail(ErrorCode::PreconditionViolation, "node is not Pending");
    const int depth = garden.depth(node_id);
    if (depth >= config.max_depth) {
        fail(ErrorCode::PreconditionViolation, "node sits at max_depth " + std::to_string(config.max_depth));
    }

    PlanParse parse;
    if (n.kind == NodeKind::Seed) {
        parse = make_broad_plan(config, n.text);
    } else {
        auto outline = render_plan_tree(garden, node_id, config.plan_render_budget);
        auto request = llm::make_request(llm::roles::kSubPlanner, prompts::sub_planner_system(config),
                                         prompts::sub_planner_user(outline, depth, config));
        parse = query_with_reprompt(request, [&](const std::string& response) {
            auto p = parse_plan_response(response);
            validate_markers(p, config);
            return p;
        });
        const auto limit = static_cast<std::size_t>(config.max_branching);
        if (parse.steps.size() > limit) {
            parse.truncated = static_cast<int>(parse.steps.size() - limit);
            parse.steps.resize(limit);
        }
    }

    ExpansionResult result;
    result.detail = parse.reformulation;
    result.truncated = parse.truncated;
    const bool at_bound = depth + 1 >= config.max_depth;
    std::vector<std::size_t> needs_assignment;
    for (const auto& step : parse.steps) {
        PlannedChild child;
        child.text = strip_leaf_marker(step);
        if (auto marker = parse_leaf_marker(step, config)) child.submodule = marker->submodule;
        if (at_bound && !child.submodule) {
            child.forced_leaf = true;
            needs_assignment.push_back(result.children.size());
        }
        result.children.push_back(std::move(child));
    }
    if (!needs_assignment.empty()) {
        std::vector<std::string> texts;
        for (auto i : needs_assignment) texts.push_back(result.children[i].text);
        auto names = assign_submodules(garden, texts);
        for (std::size_t k = 0; k < needs_assignment.size(); ++k) {
            result.children[needs_assignment[k]].submodule = names[k];
        }
    }
    return result;
}

std::vector<std::string> Planner::assign_submodules(const Garden& garden, const std::vector<std::string>& steps) {
    const GardenConfig& config = garden.config();
    auto outline = render_plan_tree(garden, std::nullopt, config.plan_render_budget);
    auto request = llm::make_request(llm::roles::kRosterAssign, prompts::roster_assign_system(config),
                                     prompts::roster_assign_user(outline, steps), llm::kEvaluatorTemperature);
    return query_with_reprompt(request, [&](const std::string& response) {
        return parse_roster_assignment(response, steps.size(), config);
    });
}

TaskSpec Planner::generate_task(const Garden& garden, NodeId leaf_id) {
    const GardenNode& leaf = garden.node(leaf_id);
    if (leaf.kind != NodeKind::PlanStep || !leaf.is_leaf) {
        fail(ErrorCode::PreconditionViolation, "node " + to_string(leaf_id) + " is not a leaf plan step");
    }
    if (garden.task_of(leaf_id)) {
        fail(ErrorCode::PreconditionViolation, "leaf " + to_string(leaf_id) + " already has a task");
    }
    const GardenConfig& config = garden.config();
    std::string submodule = leaf.assigned_submodule ? *leaf.assigned_submodule
                                                    : assign_submodules(garden, {leaf.text}).front();
    const SubmoduleDescriptor* desc = config.find_submodule(submodule);
    if (!desc) fail(ErrorCode::UnknownSubmodule, submodule);

    auto outline = render_plan_tree(garden, std::nullopt, config.plan_render_budget);
    auto request = llm::make_request(llm::roles::kTaskGenerator, prompts::task_generator_system(*desc),
                                     prompts::task_generator_user(outline, leaf.text, *desc));
    auto parts = query_with_reprompt(request, [&](const std::string& response) {
        return parse_task_sections(response, desc->executor);
    });

    TaskSpec spec;
    spec.leaf_id = leaf_id;
    spec.submodule = desc->name;
    spec.prompt_parts = std::move(parts);
    auto leaves = garden.ordered_leaves();
    spec.order_index = static_cast<int>(std::find(leaves.begin(), leaves.end(), leaf_id) - leaves.begin());
    return spec;
}

}  // namespace garden::planner
