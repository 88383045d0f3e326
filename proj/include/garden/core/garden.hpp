#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garden/core/asset_registry.hpp"
#include "garden/core/types.hpp"

namespace garden {

enum class FrontierKind { Expand, GenerateTask, Implement };
std::string_view to_string(FrontierKind k);

struct FrontierItem {
    FrontierKind kind;
    NodeId node;

    friend bool operator==(const FrontierItem&, const FrontierItem&) = default;
};

// The garden graph: plan tree (Seed/PlanStep), Task nodes hanging off leaf
// plan steps, and one implementation chain per Task. Passive data structure;
// callers serialize access.
class Garden {
public:
    explicit Garden(GardenConfig config = {}, std::string garden_id = "garden");

    const std::string& id() const { return id_; }
    const GardenConfig& config() const { return config_; }
    Mode mode() const { return mode_; }
    void set_mode(Mode mode) { mode_ = mode; }
    std::optional<NodeId> active() const { return active_; }
    void set_active(std::optional<NodeId> node) { active_ = node; }
    std::uint64_t next_id() const { return next_id_; }
    // Loader hook; must not go below any present id.
    void set_next_id(std::uint64_t next);

    AssetRegistry& assets() { return assets_; }
    const AssetRegistry& assets() const { return assets_; }

    std::optional<NodeId> root() const { return root_; }
    std::size_t size() const { return nodes_.size(); }
    bool contains(NodeId id) const { return nodes_.count(id) != 0; }
    const GardenNode& node(NodeId id) const;
    const GardenNode* find(NodeId id) const;
    const std::map<NodeId, GardenNode>& nodes() const { return nodes_; }
    // Children of any kind, sorted by child_order.
    const std::vector<NodeId>& children(NodeId id) const;
    int depth(NodeId id) const;
    int plan_child_count(NodeId id) const;

    NodeId add_seed(std::string_view text);
    NodeId add_child(NodeId parent, NodeKind kind, std::string_view text, bool is_leaf = false,
                     std::optional<std::string> submodule = std::nullopt, Payload payload = {});
    // Replaces a node's mutable state. id, kind, parent and child_order must match.
    void update_node(const GardenNode& updated);
    // Removes a childless node. Its id is never handed out again.
    void erase_node(NodeId id);
    // Reinserts a node with its original id and ordinal (restore and replay path).
    void insert_node(const GardenNode& node);

    std::vector<NodeId> descendants(NodeId id) const;
    std::vector<NodeId> ordered_leaves() const;
    std::vector<FrontierItem> compute_frontier() const;

    std::optional<NodeId> task_of(NodeId leaf) const;
    // Implementation nodes under a Task, in creation order.
    std::vector<NodeId> chain_of(NodeId task) const;
    // The Task an implementation node belongs to.
    std::optional<NodeId> owning_task(NodeId impl) const;

    // Throws KindViolation describing the first broken structural invariant.
    void check_invariants() const;

    friend bool operator==(const Garden& a, const Garden& b);

private:
    void validate_placement(const GardenNode* parent, NodeKind kind, bool is_leaf,
                            const std::optional<std::string>& submodule) const;
    // Depth and branching bounds for a new plan step under `parent`.
    void check_plan_bounds(NodeId parent, bool child_is_leaf) const;
    void link(const GardenNode& node);

    std::string id_;
    GardenConfig config_;
    Mode mode_ = Mode::Paused;
    std::optional<NodeId> active_;
    std::uint64_t next_id_ = 1;
    std::optional<NodeId> root_;
    std::map<NodeId, GardenNode> nodes_;
    std::map<NodeId, std::vector<NodeId>> children_;
    AssetRegistry assets_;
};

}  // namespace garden
