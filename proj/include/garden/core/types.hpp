#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace garden {

struct NodeId {
    std::uint64_t value = 0;

    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

std::string to_string(NodeId id);

enum class NodeKind { Seed, PlanStep, Task, CodeAttempt, Evaluation, AssetArtifact };
enum class NodeStatus { Pending, InProgress, Succeeded, Failed, Pruned };
enum class Mode { Paused, Step, Play };

// Stages of one code-generation attempt, in the order they are reached.
enum class Stage { Generated, Compiled, Placed, Ran, VisuallyEvaluated };
enum class Verdict { Pass, Fail, Pending };
// Generation covers failures before any file exists (provider error, no parsable files).
enum class SourceStage { Generation, Compile, Placement, Crash, Visual };
enum class AssetOrigin { Downloaded, Generated, Procedural };

std::string_view to_string(NodeKind v);
std::string_view to_string(NodeStatus v);
std::string_view to_string(Mode v);
std::string_view to_string(Stage v);
std::string_view to_string(Verdict v);
std::string_view to_string(SourceStage v);
std::string_view to_string(AssetOrigin v);

std::optional<NodeKind> node_kind_from(std::string_view s);
std::optional<NodeStatus> node_status_from(std::string_view s);
std::optional<Mode> mode_from(std::string_view s);
std::optional<Stage> stage_from(std::string_view s);
std::optional<Verdict> verdict_from(std::string_view s);
std::optional<SourceStage> source_stage_from(std::string_view s);
std::optional<AssetOrigin> asset_origin_from(std::string_view s);

bool is_implementation(NodeKind kind);

// What a submodule does when handed a task.
enum class Executor { CodeGenerator, ProceduralMesh, DiffusionMesh, MeshDownloader };
std::string_view to_string(Executor v);
std::optional<Executor> executor_from(std::string_view s);

struct SubmoduleDescriptor {
    std::string name;
    std::string description;
    Executor executor = Executor::CodeGenerator;

    friend bool operator==(const SubmoduleDescriptor&, const SubmoduleDescriptor&) = default;
};

// Named sections each executor expects in its task prompt.
std::vector<std::string> prompt_schema(Executor executor);

std::vector<SubmoduleDescriptor> default_roster();

struct GardenConfig {
    int max_depth = 3;
    int max_branching = 4;
    int max_code_attempts = 3;
    std::vector<SubmoduleDescriptor> submodule_roster = default_roster();
    // Passed through verbatim into planner system prompts when non-empty.
    std::string test_disclaimer;
    // Character budget for the plan outline shown to the sub-planner.
    std::size_t plan_render_budget = 12000;
    std::vector<std::string> starter_content;

    const SubmoduleDescriptor* find_submodule(std::string_view name) const;
    void validate() const;

    friend bool operator==(const GardenConfig&, const GardenConfig&) = default;
};

using Vec3 = std::array<double, 3>;
using PropertyValue = std::variant<bool, std::int64_t, double, std::string>;

struct ActorPlacement {
    std::string class_name;
    Vec3 position{0, 0, 0};  // centimeters
    Vec3 rotation{0, 0, 0};  // degrees: pitch, yaw, roll
    Vec3 scale{1, 1, 1};
    std::map<std::string, PropertyValue> properties;

    friend bool operator==(const ActorPlacement&, const ActorPlacement&) = default;
};

struct LayoutSpec {
    std::vector<ActorPlacement> actors;

    friend bool operator==(const LayoutSpec&, const LayoutSpec&) = default;
};

struct CodeBundle {
    std::map<std::string, std::string> files;  // relative path -> source
    std::string summary;

    std::string content_hash() const;

    friend bool operator==(const CodeBundle&, const CodeBundle&) = default;
};

struct TaskSpec {
    NodeId leaf_id;
    std::string submodule;
    std::map<std::string, std::string> prompt_parts;
    int order_index = 0;

    // All prompt parts concatenated under their headers.
    std::string full_prompt() const;

    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct PipelineAttempt {
    int index = 1;
    CodeBundle bundle;
    std::optional<LayoutSpec> layout;
    Stage stage_reached = Stage::Generated;
    Verdict verdict = Verdict::Pending;
    std::string feedback;
    std::vector<std::string> screenshots;
    // Set once the bundle compiled; compile-and-run requires it.
    bool compiled = false;
    std::string content_hash;

    friend bool operator==(const PipelineAttempt&, const PipelineAttempt&) = default;
};

struct EvaluationReport {
    Verdict verdict = Verdict::Fail;
    std::string feedback;
    SourceStage source_stage = SourceStage::Compile;
    bool user_edited = false;

    friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

struct AssetRecord {
    std::string asset_id;
    std::string display_name;
    std::string mesh_path;  // workspace-relative
    AssetOrigin origin = AssetOrigin::Downloaded;
    std::optional<std::string> preview_image;
    std::optional<NodeId> origin_node;

    friend bool operator==(const AssetRecord&, const AssetRecord&) = default;
};

struct PlanDetail {
    std::string detail;  // restatement or outline produced while expanding
    std::string error;   // last failure message, if expansion failed

    friend bool operator==(const PlanDetail&, const PlanDetail&) = default;
};

struct AssetArtifact {
    std::optional<std::string> asset_id;
    std::string stage;  // adapter stage that failed, empty on success
    std::string message;

    friend bool operator==(const AssetArtifact&, const AssetArtifact&) = default;
};

using Payload =
    std::variant<std::monostate, PlanDetail, TaskSpec, PipelineAttempt, EvaluationReport, AssetArtifact>;

struct GardenNode {
    NodeId id;
    NodeKind kind = NodeKind::PlanStep;
    std::optional<NodeId> parent;
    int child_order = 0;
    std::string text;
    bool is_leaf = false;
    std::optional<std::string> assigned_submodule;
    NodeStatus status = NodeStatus::Pending;
    Payload payload;

    friend bool operator==(const GardenNode&, const GardenNode&) = default;
};

}  // namespace garden

template <>
struct std::hash<garden::NodeId> {
    std::size_t operator()(const garden::NodeId& id) const noexcept {
        return std::hash<std::uint64_t>{}(id.value);
    }
};
