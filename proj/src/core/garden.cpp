#include "garden/core/garden.hpp"

#include <algorithm>
#include <deque>

#include "garden/error.hpp"
#include "garden/util/text.hpp"

namespace garden {

std::string_view to_string(FrontierKind k) {
    switch (k) {
        case FrontierKind::Expand: return "Expand";
        case FrontierKind::GenerateTask: return "GenerateTask";
        case FrontierKind::Implement: return "Implement";
    }
    return "?";
}

Garden::Garden(GardenConfig config, std::string garden_id) : id_(std::move(garden_id)), config_(std::move(config)) {
    config_.validate();
}

const GardenNode& Garden::node(NodeId id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) fail(ErrorCode::UnknownNode, "node " + to_string(id));
    return it->second;
}

const GardenNode* Garden::find(NodeId id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

const std::vector<NodeId>& Garden::children(NodeId id) const {
    static const std::vector<NodeId> kNone;
    auto it = children_.find(id);
    return it == children_.end() ? kNone : it->second;
}

int Garden::depth(NodeId id) const {
    int d = 0;
    const GardenNode* n = &node(id);
    while (n->parent) {
        n = &node(*n->parent);
        ++d;
    }
    return d;
}

int Garden::plan_child_count(NodeId id) const {
    int count = 0;
    for (NodeId c : children(id)) {
        if (node(c).kind == NodeKind::PlanStep) ++count;
    }
    return count;
}

void Garden::validate_placement(const GardenNode* parent, NodeKind kind, bool is_leaf,
                                const std::optional<std::string>& submodule) const {
    if (kind != NodeKind::PlanStep && (is_leaf || submodule)) {
        fail(ErrorCode::KindViolation, std::string(to_string(kind)) + " cannot carry leaf status");
    }
    if (submodule) {
        if (!is_leaf) fail(ErrorCode::KindViolation, "assigned submodule requires is_leaf");
        if (!config_.find_submodule(*submodule)) fail(ErrorCode::UnknownSubmodule, *submodule);
    }
    if (kind == NodeKind::Seed) {
        if (parent) fail(ErrorCode::KindViolation, "Seed cannot have a parent");
        return;
    }
    if (!parent) fail(ErrorCode::UnknownParent, "non-seed node requires a parent");

    auto has_child_kind = [&](auto pred) {
        const auto& cs = children(parent->id);
        return std::any_of(cs.begin(), cs.end(), [&](NodeId c) { return pred(node(c).kind); });
    };

    switch (kind) {
        case NodeKind::Seed: break;
        case NodeKind::PlanStep:
            if (parent->kind != NodeKind::Seed && parent->kind != NodeKind::PlanStep) {
                fail(ErrorCode::KindViolation, "PlanStep must hang off Seed or PlanStep");
            }
            if (parent->is_leaf) fail(ErrorCode::LeafViolation, "parent " + to_string(parent->id) + " is a leaf");
            check_plan_bounds(parent->id, is_leaf);
            break;
        case NodeKind::Task:
            if (parent->kind != NodeKind::PlanStep || !parent->is_leaf) {
                fail(ErrorCode::KindViolation, "Task must hang off a leaf PlanStep");
            }
            if (has_child_kind([](NodeKind k) { return k == NodeKind::Task; })) {
                fail(ErrorCode::KindViolation, "leaf " + to_string(parent->id) + " already has a Task");
            }
            break;
        case NodeKind::CodeAttempt:
        case NodeKind::Evaluation:
        case NodeKind::AssetArtifact: {
            bool ok = false;
            if (kind == NodeKind::CodeAttempt) {
                ok = parent->kind == NodeKind::Task || parent->kind == NodeKind::Evaluation;
            } else if (kind == NodeKind::Evaluation) {
                ok = parent->kind == NodeKind::CodeAttempt;
            } else {
                ok = parent->kind == NodeKind::Task;
            }
            if (!ok) {
                fail(ErrorCode::KindViolation, std::string(to_string(kind)) + " cannot follow " +
                                                   std::string(to_string(parent->kind)));
            }
            if (has_child_kind(is_implementation)) {
                fail(ErrorCode::KindViolation, "implementation chain at " + to_string(parent->id) +
                                                   " already continues");
            }
            break;
        }
    }
}

void Garden::check_plan_bounds(NodeId parent, bool child_is_leaf) const {
    const int child_depth = depth(parent) + 1;
    if (child_depth > config_.max_depth) {
        fail(ErrorCode::PreconditionViolation, "a child of " + to_string(parent) + " would exceed max_depth");
    }
    if (child_depth == config_.max_depth && !child_is_leaf) {
        fail(ErrorCode::LeafViolation, "plan steps at max_depth must be leaves");
    }
    if (plan_child_count(parent) >= config_.max_branching) {
        fail(ErrorCode::PreconditionViolation, to_string(parent) + " already has max_branching sub-steps");
    }
}

void Garden::link(const GardenNode& n) {
    if (!n.parent) return;
    auto& siblings = children_[*n.parent];
    auto pos = std::lower_bound(siblings.begin(), siblings.end(), n.child_order,
                                [&](NodeId s, int order) { return node(s).child_order < order; });
    siblings.insert(pos, n.id);
}

NodeId Garden::add_seed(std::string_view text) {
    if (root_) fail(ErrorCode::SeedAlreadyExists, "garden already has seed " + to_string(*root_));
    auto trimmed = text::trim(text);
    if (trimmed.empty()) fail(ErrorCode::EmptyText, "seed text is empty");
    GardenNode n;
    n.id = NodeId{next_id_++};
    n.kind = NodeKind::Seed;
    n.text = std::string(text);
    nodes_.emplace(n.id, n);
    root_ = n.id;
    return n.id;
}

NodeId Garden::add_child(NodeId parent, NodeKind kind, std::string_view text, bool is_leaf,
                         std::optional<std::string> submodule, Payload payload) {
    const GardenNode* p = find(parent);
    if (!p) fail(ErrorCode::UnknownParent, "parent " + to_string(parent));
    if (kind == NodeKind::Seed) fail(ErrorCode::KindViolation, "use add_seed for Seed nodes");
    validate_placement(p, kind, is_leaf, submodule);

    int order = 0;
    const auto& siblings = children(parent);
    if (!siblings.empty()) order = node(siblings.back()).child_order + 1;

    GardenNode n;
    n.id = NodeId{next_id_++};
    n.kind = kind;
    n.parent = parent;
    n.child_order = order;
    n.text = std::string(text);
    n.is_leaf = is_leaf;
    if (submodule) n.assigned_submodule = config_.find_submodule(*submodule)->name;
    n.payload = std::move(payload);
    nodes_.emplace(n.id, n);
    link(n);
    return n.id;
}

void Garden::update_node(const GardenNode& updated) {
    auto it = nodes_.find(updated.id);
    if (it == nodes_.end()) fail(ErrorCode::UnknownNode, "node " + to_string(updated.id));
    const GardenNode& cur = it->second;
    if (cur.kind != updated.kind) fail(ErrorCode::KindViolation, "node kind cannot change");
    if (cur.parent != updated.parent || cur.child_order != updated.child_order) {
        fail(ErrorCode::KindViolation, "node position cannot change");
    }
    if (updated.kind != NodeKind::PlanStep && (updated.is_leaf || updated.assigned_submodule)) {
        fail(ErrorCode::KindViolation, "only PlanStep nodes carry leaf status");
    }
    if (updated.assigned_submodule) {
        if (!updated.is_leaf) fail(ErrorCode::KindViolation, "assigned submodule requires is_leaf");
        if (!config_.find_submodule(*updated.assigned_submodule)) {
            fail(ErrorCode::UnknownSubmodule, *updated.assigned_submodule);
        }
    }
    if (updated.kind == NodeKind::PlanStep && !updated.is_leaf && depth(updated.id) >= config_.max_depth) {
        fail(ErrorCode::LeafViolation, "node " + to_string(updated.id) + " at max_depth must be a leaf");
    }
    for (NodeId c : children(updated.id)) {
        NodeKind ck = node(c).kind;
        if (updated.is_leaf && ck == NodeKind::PlanStep) {
            fail(ErrorCode::LeafViolation, "node " + to_string(updated.id) + " has plan children");
        }
        if (!updated.is_leaf && ck == NodeKind::Task) {
            fail(ErrorCode::KindViolation, "node " + to_string(updated.id) + " still has a Task");
        }
    }
    it->second = updated;
}

void Garden::erase_node(NodeId id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) fail(ErrorCode::UnknownNode, "node " + to_string(id));
    if (!children(id).empty()) fail(ErrorCode::PreconditionViolation, "node " + to_string(id) + " has children");
    if (it->second.parent) {
        auto& siblings = children_[*it->second.parent];
        siblings.erase(std::remove(siblings.begin(), siblings.end(), id), siblings.end());
        if (siblings.empty()) children_.erase(*it->second.parent);
    } else {
        root_.reset();
    }
    if (active_ == id) active_.reset();
    children_.erase(id);
    nodes_.erase(it);
}

void Garden::set_next_id(std::uint64_t next) {
    if (!nodes_.empty() && nodes_.rbegin()->first.value >= next) {
        fail(ErrorCode::ConflictingIds, "allocator " + std::to_string(next) + " below present ids");
    }
    next_id_ = std::max<std::uint64_t>(next, 1);
}

void Garden::insert_node(const GardenNode& n) {
    if (contains(n.id)) fail(ErrorCode::ConflictingIds, "node " + to_string(n.id) + " already present");
    const GardenNode* p = nullptr;
    if (n.parent) {
        p = find(*n.parent);
        if (!p) fail(ErrorCode::UnknownParent, "parent " + to_string(*n.parent));
    } else if (n.kind != NodeKind::Seed) {
        fail(ErrorCode::UnknownParent, "non-seed node without parent");
    } else if (root_) {
        fail(ErrorCode::SeedAlreadyExists, "garden already has a seed");
    }
    validate_placement(p, n.kind, n.is_leaf, n.assigned_submodule);
    if (p) {
        for (NodeId s : children(p->id)) {
            if (node(s).child_order == n.child_order) {
                fail(ErrorCode::ConflictingIds, "ordinal " + std::to_string(n.child_order) + " taken under " +
                                                    to_string(p->id));
            }
        }
    }
    nodes_.emplace(n.id, n);
    if (!n.parent) root_ = n.id;
    link(n);
    next_id_ = std::max(next_id_, n.id.value + 1);
}

std::vector<NodeId> Garden::descendants(NodeId id) const {
    node(id);
    std::vector<NodeId> out;
    std::vector<NodeId> stack(children(id).rbegin(), children(id).rend());
    while (!stack.empty()) {
        NodeId cur = stack.back();
        stack.pop_back();
        out.push_back(cur);
        const auto& cs = children(cur);
        stack.insert(stack.end(), cs.rbegin(), cs.rend());
    }
    return out;
}

std::vector<NodeId> Garden::ordered_leaves() const {
    std::vector<NodeId> out;
    if (!root_) return out;
    std::vector<NodeId> stack{*root_};
    while (!stack.empty()) {
        NodeId cur = stack.back();
        stack.pop_back();
        const GardenNode& n = node(cur);
        if (n.kind == NodeKind::PlanStep && n.is_leaf) out.push_back(cur);
        const auto& cs = children(cur);
        for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
            if (node(*it).kind == NodeKind::PlanStep) stack.push_back(*it);
        }
    }
    return out;
}

std::vector<FrontierItem> Garden::compute_frontier() const {
    std::vector<FrontierItem> out;
    if (!root_) return out;

    std::deque<NodeId> queue{*root_};
    while (!queue.empty()) {
        NodeId cur = queue.front();
        queue.pop_front();
        const GardenNode& n = node(cur);
        if (n.status == NodeStatus::Pending && !n.is_leaf && children(cur).empty()) {
            out.push_back({FrontierKind::Expand, cur});
        }
        for (NodeId c : children(cur)) {
            if (node(c).kind == NodeKind::PlanStep) queue.push_back(c);
        }
    }

    auto leaves = ordered_leaves();
    for (NodeId leaf : leaves) {
        if (!task_of(leaf) && node(leaf).status != NodeStatus::Failed) {
            out.push_back({FrontierKind::GenerateTask, leaf});
        }
    }
    for (NodeId leaf : leaves) {
        if (auto task = task_of(leaf)) {
            auto st = node(*task).status;
            if (st == NodeStatus::Pending || st == NodeStatus::InProgress) {
                out.push_back({FrontierKind::Implement, *task});
            }
        }
    }
    return out;
}

std::optional<NodeId> Garden::task_of(NodeId leaf) const {
    for (NodeId c : children(leaf)) {
        if (node(c).kind == NodeKind::Task) return c;
    }
    return std::nullopt;
}

std::vector<NodeId> Garden::chain_of(NodeId task) const {
    std::vector<NodeId> out;
    NodeId cur = task;
    for (;;) {
        std::optional<NodeId> next;
        for (NodeId c : children(cur)) {
            if (is_implementation(node(c).kind)) next = c;
        }
        if (!next) break;
        out.push_back(*next);
        cur = *next;
    }
    return out;
}

std::optional<NodeId> Garden::owning_task(NodeId impl) const {
    const GardenNode* n = &node(impl);
    while (n->parent) {
        n = &node(*n->parent);
        if (n->kind == NodeKind::Task) return n->id;
    }
    return std::nullopt;
}

void Garden::check_invariants() const {
    int seeds = 0;
    for (const auto& [id, n] : nodes_) {
        if (n.kind == NodeKind::Seed) {
            ++seeds;
            if (n.parent) fail(ErrorCode::KindViolation, "seed has a parent");
            continue;
        }
        if (!n.parent) fail(ErrorCode::KindViolation, "node " + to_string(id) + " has no parent");
        if (!contains(*n.parent)) fail(ErrorCode::KindViolation, "dangling parent on " + to_string(id));
        const auto& sib = children(*n.parent);
        if (std::count(sib.begin(), sib.end(), id) != 1) {
            fail(ErrorCode::KindViolation, "child index out of sync for " + to_string(id));
        }
        if (n.assigned_submodule && !n.is_leaf) fail(ErrorCode::KindViolation, "submodule on non-leaf");
        if (n.kind == NodeKind::PlanStep && n.is_leaf && plan_child_count(id) > 0) {
            fail(ErrorCode::LeafViolation, "leaf " + to_string(id) + " has plan children");
        }
        if (n.kind == NodeKind::PlanStep) {
            const int d = depth(id);
            if (d > config_.max_depth) fail(ErrorCode::PreconditionViolation, "node " + to_string(id) + " exceeds max_depth");
            if (d == config_.max_depth && !n.is_leaf) {
                fail(ErrorCode::LeafViolation, "node " + to_string(id) + " at max_depth is not a leaf");
            }
        }
        if (plan_child_count(id) > config_.max_branching) {
            fail(ErrorCode::PreconditionViolation, "node " + to_string(id) + " exceeds max_branching");
        }
        if (n.kind == NodeKind::Task) {
            const GardenNode& p = node(*n.parent);
            if (p.kind != NodeKind::PlanStep || !p.is_leaf) fail(ErrorCode::KindViolation, "task under non-leaf");
        }
        if (n.id.value >= next_id_) fail(ErrorCode::KindViolation, "id beyond allocator");
    }
    if (seeds > 1) fail(ErrorCode::KindViolation, "more than one seed");
    if (seeds == 1 && !nodes_.empty() && root_ && !contains(*root_)) fail(ErrorCode::KindViolation, "root missing");
    // Cycle check: every node must reach the root within size() hops.
    for (const auto& [id, n] : nodes_) {
        const GardenNode* cur = &n;
        std::size_t hops = 0;
        while (cur->parent) {
            cur = &node(*cur->parent);
            if (++hops > nodes_.size()) fail(ErrorCode::KindViolation, "cycle through " + to_string(id));
        }
    }
}

bool operator==(const Garden& a, const Garden& b) {
    return a.id_ == b.id_ && a.config_ == b.config_ && a.mode_ == b.mode_ && a.active_ == b.active_ &&
           a.next_id_ == b.next_id_ && a.root_ == b.root_ && a.nodes_ == b.nodes_ && a.assets_ == b.assets_;
}

}  // namespace garden
