#pragma once

#include <optional>
#include <string>
#include <vector>

#include "garden/core/garden.hpp"
#include "garden/persistence/codec.hpp"

namespace garden::orchestrator {

enum class EditKind { ToggleLeaf, EditNodeText, EditFeedback, SetMode, CompileAndRunAt };
std::string_view to_string(EditKind k);

struct UserEdit {
    EditKind kind = EditKind::ToggleLeaf;
    std::optional<NodeId> target;
    std::optional<bool> is_leaf;             // ToggleLeaf
    std::optional<std::string> submodule;    // ToggleLeaf(true), optional
    std::optional<std::string> text;         // EditNodeText, EditFeedback
    std::optional<Mode> mode;                // SetMode

    static UserEdit toggle_leaf(NodeId target, bool is_leaf, std::optional<std::string> submodule = std::nullopt);
    static UserEdit edit_text(NodeId target, std::string text);
    static UserEdit edit_feedback(NodeId evaluation, std::string feedback);
    static UserEdit set_mode(Mode mode);
    static UserEdit compile_and_run_at(NodeId target);

    persistence::Json to_json() const;
};

// What an edit does to the garden, computed without touching it.
struct CascadePlan {
    std::vector<NodeId> removed;            // pre-order: parents before children
    std::vector<GardenNode> updates;        // post-edit states of nodes changed in place
    std::vector<std::string> retracted;     // asset ids created by removed nodes
};

// Removal set and in-place changes for ToggleLeaf, EditNodeText or
// EditFeedback. Implementation chains of every task after the edited point in
// ordered_leaves are invalidated. Throws UnknownNode, KindViolation,
// PreconditionViolation, UnknownSubmodule or EmptyText.
CascadePlan plan_edit(const Garden& garden, const UserEdit& edit);

// Leaves strictly after `node` in DFS order that are not inside its subtree.
std::vector<NodeId> later_leaves(const Garden& garden, NodeId node);

}  // namespace garden::orchestrator
