#include "garden/orchestrator/edits.hpp"

#include <algorithm>
#include <set>

#include "garden/error.hpp"
#include "garden/util/text.hpp"

namespace garden::orchestrator {

std::string_view to_string(EditKind k) {
    switch (k) {
        case EditKind::ToggleLeaf: return "ToggleLeaf";
        case EditKind::EditNodeText: return "EditNodeText";
        case EditKind::EditFeedback: return "EditFeedback";
        case EditKind::SetMode: return "SetMode";
        case EditKind::CompileAndRunAt: return "CompileAndRunAt";
    }
    return "?";
}

UserEdit UserEdit::toggle_leaf(NodeId target, bool is_leaf, std::optional<std::string> submodule) {
    UserEdit e;
    e.kind = EditKind::ToggleLeaf;
    e.target = target;
    e.is_leaf = is_leaf;
    e.submodule = std::move(submodule);
    return e;
}

UserEdit UserEdit::edit_text(NodeId target, std::string text) {
    UserEdit e;
    e.kind = EditKind::EditNodeText;
    e.target = target;
    e.text = std::move(text);
    return e;
}

UserEdit UserEdit::edit_feedback(NodeId evaluation, std::string feedback) {
    UserEdit e;
    e.kind = EditKind::EditFeedback;
    e.target = evaluation;
    e.text = std::move(feedback);
    return e;
}

UserEdit UserEdit::set_mode(Mode mode) {
    UserEdit e;
    e.kind = EditKind::SetMode;
    e.mode = mode;
    return e;
}

UserEdit UserEdit::compile_and_run_at(NodeId target) {
    UserEdit e;
    e.kind = EditKind::CompileAndRunAt;
    e.target = target;
    return e;
}

persistence::Json UserEdit::to_json() const {
    persistence::Json j;
    j["kind"] = to_string(kind);
    if (target) j["target"] = target->value;
    if (is_leaf) j["is_leaf"] = *is_leaf;
    if (submodule) j["submodule"] = *submodule;
    if (text) j["text"] = *text;
    if (mode) j["mode"] = to_string(*mode);
    return j;
}

std::vector<NodeId> later_leaves(const Garden& garden, NodeId node) {
    std::vector<NodeId> out;
    if (!garden.root()) return out;
    std::set<NodeId> inside;
    for (auto d : garden.descendants(node)) inside.insert(d);
    std::vector<NodeId> order{*garden.root()};
    auto rest = garden.descendants(*garden.root());
    order.insert(order.end(), rest.begin(), rest.end());
    auto pos = std::find(order.begin(), order.end(), node);
    if (pos == order.end()) return out;
    std::set<NodeId> after(std::next(pos), order.end());
    for (auto leaf : garden.ordered_leaves()) {
        if (after.count(leaf) && !inside.count(leaf)) out.push_back(leaf);
    }
    return out;
}

namespace {

class Builder {
public:
    explicit Builder(const Garden& g) : g_(g) {}

    void remove_subtree_below(NodeId id) {
        for (auto d : g_.descendants(id)) add_removed(d);
    }

    // Drops a later task's implementation chain and resets it to Pending.
    void invalidate_later_tasks(NodeId from) {
        for (auto leaf : later_leaves(g_, from)) {
            auto task = g_.task_of(leaf);
            if (!task) continue;
            auto chain = g_.descendants(*task);
            for (auto d : chain) add_removed(d);
            const auto& t = g_.node(*task);
            if (!chain.empty() || t.status != NodeStatus::Pending) {
                GardenNode updated = t;
                updated.status = NodeStatus::Pending;
                update(updated);
            }
        }
    }

    void update(const GardenNode& n) {
        for (auto& u : plan_.updates) {
            if (u.id == n.id) {
                u = n;
                return;
            }
        }
        plan_.updates.push_back(n);
    }

    CascadePlan finish() {
        for (const auto& r : g_.assets().records()) {
            if (r.origin_node && removed_set_.count(*r.origin_node)) plan_.retracted.push_back(r.asset_id);
        }
        return std::move(plan_);
    }

private:
    void add_removed(NodeId id) {
        if (removed_set_.insert(id).second) plan_.removed.push_back(id);
    }

    const Garden& g_;
    CascadePlan plan_;
    std::set<NodeId> removed_set_;
};

const GardenNode& target_of(const Garden& g, const UserEdit& edit) {
    if (!edit.target) fail(ErrorCode::InvalidTarget, std::string(to_string(edit.kind)) + " needs a target");
    return g.node(*edit.target);
}

}  // namespace

CascadePlan plan_edit(const Garden& g, const UserEdit& edit) {
    Builder b(g);
    switch (edit.kind) {
        case EditKind::ToggleLeaf: {
            const auto& x = target_of(g, edit);
            if (x.kind != NodeKind::PlanStep) fail(ErrorCode::KindViolation, "only plan steps toggle leaf status");
            if (!edit.is_leaf) fail(ErrorCode::InvalidTarget, "ToggleLeaf needs is_leaf");
            if (*edit.is_leaf == x.is_leaf) {
                fail(ErrorCode::PreconditionViolation,
                     "node " + to_string(x.id) + (x.is_leaf ? " is already a leaf" : " is already a non-leaf"));
            }
            GardenNode updated = x;
            updated.is_leaf = *edit.is_leaf;
            updated.status = NodeStatus::Pending;
            if (*edit.is_leaf) {
                if (edit.submodule) {
                    const auto* desc = g.config().find_submodule(*edit.submodule);
                    if (!desc) fail(ErrorCode::UnknownSubmodule, *edit.submodule);
                    updated.assigned_submodule = desc->name;
                } else {
                    updated.assigned_submodule.reset();
                }
            } else {
                if (g.depth(x.id) >= g.config().max_depth) {
                    fail(ErrorCode::PreconditionViolation, "a node at max_depth must stay a leaf");
                }
                updated.assigned_submodule.reset();
            }
            b.remove_subtree_below(x.id);
            b.invalidate_later_tasks(x.id);
            b.update(updated);
            break;
        }
        case EditKind::EditNodeText: {
            const auto& x = target_of(g, edit);
            if (x.kind != NodeKind::Seed && x.kind != NodeKind::PlanStep) {
                fail(ErrorCode::KindViolation, "only plan nodes have editable text");
            }
            if (!edit.text || text::trim(*edit.text).empty()) fail(ErrorCode::EmptyText, "node text is empty");
            GardenNode updated = x;
            updated.text = *edit.text;
            b.update(updated);
            break;
        }
        case EditKind::EditFeedback: {
            const auto& e = target_of(g, edit);
            if (e.kind != NodeKind::Evaluation) fail(ErrorCode::KindViolation, "feedback edits target evaluations");
            if (!edit.text || text::trim(*edit.text).empty()) fail(ErrorCode::EmptyText, "feedback is empty");
            auto task = g.owning_task(e.id);
            if (!task) fail(ErrorCode::KindViolation, "evaluation outside a task chain");
            const auto leaf = *g.node(*task).parent;
            b.remove_subtree_below(e.id);
            b.invalidate_later_tasks(leaf);
            GardenNode updated = e;
            const auto* current = std::get_if<EvaluationReport>(&e.payload);
            if (!current) fail(ErrorCode::KindViolation, "evaluation without a report");
            auto report = *current;
            report.feedback = *edit.text;
            report.verdict = Verdict::Fail;
            report.user_edited = true;
            updated.payload = report;
            updated.status = NodeStatus::Failed;
            b.update(updated);
            GardenNode t = g.node(*task);
            t.status = NodeStatus::Pending;
            b.update(t);
            break;
        }
        case EditKind::SetMode:
        case EditKind::CompileAndRunAt:
            fail(ErrorCode::InvalidTarget, std::string(to_string(edit.kind)) + " is not a cascading edit");
    }
    return b.finish();
}

}  // namespace garden::orchestrator
