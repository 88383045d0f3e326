#include "garden/core/types.hpp"

#include <algorithm>
#include <set>

#include "garden/error.hpp"
#include "garden/util/hash.hpp"
#include "garden/util/text.hpp"

namespace garden {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(std::string_view s, const std::array<E, N>& values) {
    for (E v : values) {
        if (text::iequals(to_string(v), s)) return v;
    }
    return std::nullopt;
}

}  // namespace

std::string to_string(NodeId id) { return std::to_string(id.value); }

std::string_view to_string(NodeKind v) {
    switch (v) {
        case NodeKind::Seed: return "Seed";
        case NodeKind::PlanStep: return "PlanStep";
        case NodeKind::Task: return "Task";
        case NodeKind::CodeAttempt: return "CodeAttempt";
        case NodeKind::Evaluation: return "Evaluation";
        case NodeKind::AssetArtifact: return "AssetArtifact";
    }
    return "?";
}

std::string_view to_string(NodeStatus v) {
    switch (v) {
        case NodeStatus::Pending: return "Pending";
        case NodeStatus::InProgress: return "InProgress";
        case NodeStatus::Succeeded: return "Succeeded";
        case NodeStatus::Failed: return "Failed";
        case NodeStatus::Pruned: return "Pruned";
    }
    return "?";
}

std::string_view to_string(Mode v) {
    switch (v) {
        case Mode::Paused: return "Paused";
        case Mode::Step: return "Step";
        case Mode::Play: return "Play";
    }
    return "?";
}

std::string_view to_string(Stage v) {
    switch (v) {
        case Stage::Generated: return "Generated";
        case Stage::Compiled: return "Compiled";
        case Stage::Placed: return "Placed";
        case Stage::Ran: return "Ran";
        case Stage::VisuallyEvaluated: return "VisuallyEvaluated";
    }
    return "?";
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "Pass";
        case Verdict::Fail: return "Fail";
        case Verdict::Pending: return "Pending";
    }
    return "?";
}

std::string_view to_string(SourceStage v) {
    switch (v) {
        case SourceStage::Generation: return "Generation";
        case SourceStage::Compile: return "Compile";
        case SourceStage::Placement: return "Placement";
        case SourceStage::Crash: return "Crash";
        case SourceStage::Visual: return "Visual";
    }
    return "?";
}

std::string_view to_string(AssetOrigin v) {
    switch (v) {
        case AssetOrigin::Downloaded: return "Downloaded";
        case AssetOrigin::Generated: return "Generated";
        case AssetOrigin::Procedural: return "Procedural";
    }
    return "?";
}

std::string_view to_string(Executor v) {
    switch (v) {
        case Executor::CodeGenerator: return "code_generator";
        case Executor::ProceduralMesh: return "procedural_mesh";
        case Executor::DiffusionMesh: return "diffusion_mesh";
        case Executor::MeshDownloader: return "mesh_downloader";
    }
    return "?";
}

std::optional<NodeKind> node_kind_from(std::string_view s) {
    return lookup(s, std::array{NodeKind::Seed, NodeKind::PlanStep, NodeKind::Task, NodeKind::CodeAttempt,
                                NodeKind::Evaluation, NodeKind::AssetArtifact});
}
std::optional<NodeStatus> node_status_from(std::string_view s) {
    return lookup(s, std::array{NodeStatus::Pending, NodeStatus::InProgress, NodeStatus::Succeeded,
                                NodeStatus::Failed, NodeStatus::Pruned});
}
std::optional<Mode> mode_from(std::string_view s) {
    if (text::iequals(s, "pause")) return Mode::Paused;
    return lookup(s, std::array{Mode::Paused, Mode::Step, Mode::Play});
}
std::optional<Stage> stage_from(std::string_view s) {
    return lookup(s, std::array{Stage::Generated, Stage::Compiled, Stage::Placed, Stage::Ran,
                                Stage::VisuallyEvaluated});
}
std::optional<Verdict> verdict_from(std::string_view s) {
    return lookup(s, std::array{Verdict::Pass, Verdict::Fail, Verdict::Pending});
}
std::optional<SourceStage> source_stage_from(std::string_view s) {
    return lookup(s, std::array{SourceStage::Generation, SourceStage::Compile, SourceStage::Placement,
                                SourceStage::Crash, SourceStage::Visual});
}
std::optional<AssetOrigin> asset_origin_from(std::string_view s) {
    return lookup(s, std::array{AssetOrigin::Downloaded, AssetOrigin::Generated, AssetOrigin::Procedural});
}
std::optional<Executor> executor_from(std::string_view s) {
    return lookup(s, std::array{Executor::CodeGenerator, Executor::ProceduralMesh, Executor::DiffusionMesh,
                                Executor::MeshDownloader});
}

bool is_implementation(NodeKind kind) {
    return kind == NodeKind::CodeAttempt || kind == NodeKind::Evaluation || kind == NodeKind::AssetArtifact;
}

std::vector<std::string> prompt_schema(Executor executor) {
    switch (executor) {
        case Executor::CodeGenerator: return {"actor", "spawner"};
        case Executor::ProceduralMesh: return {"actor"};
        case Executor::DiffusionMesh: return {"description"};
        case Executor::MeshDownloader: return {"description"};
    }
    return {};
}

std::vector<SubmoduleDescriptor> default_roster() {
    return {
        {"code_generator",
         "Writes C++ actor classes implementing behaviour, interaction or game logic, plus a spawn layout "
         "placing instances of those actors in the level.",
         Executor::CodeGenerator},
        {"procedural_mesh",
         "Writes a C++ actor that builds a procedural mesh for a structure or terrain; one instance is placed "
         "at the origin for inspection.",
         Executor::ProceduralMesh},
        {"diffusion_mesh",
         "Generates a novel textured 3D mesh from a detailed text description (text-to-image then "
         "image-to-3D).",
         Executor::DiffusionMesh},
        {"mesh_downloader",
         "Retrieves an existing handmade 3D asset from a large database given a concise description of a "
         "common object.",
         Executor::MeshDownloader},
    };
}

const SubmoduleDescriptor* GardenConfig::find_submodule(std::string_view name) const {
    auto wanted = text::trim(name);
    for (const auto& s : submodule_roster) {
        if (text::iequals(s.name, wanted)) return &s;
    }
    return nullptr;
}

void GardenConfig::validate() const {
    if (max_depth < 1) fail(ErrorCode::InvalidConfig, "max_depth must be >= 1");
    if (max_branching < 1) fail(ErrorCode::InvalidConfig, "max_branching must be >= 1");
    if (max_code_attempts < 1) fail(ErrorCode::InvalidConfig, "max_code_attempts must be >= 1");
    if (submodule_roster.empty()) fail(ErrorCode::InvalidConfig, "submodule_roster is empty");
    std::set<std::string> seen;
    for (const auto& s : submodule_roster) {
        auto key = text::to_lower(s.name);
        if (key.empty()) fail(ErrorCode::InvalidConfig, "submodule with empty name");
        if (key.find_first_of("[]\n") != std::string::npos) {
            fail(ErrorCode::InvalidConfig, "submodule name contains reserved characters: " + s.name);
        }
        if (!seen.insert(key).second) fail(ErrorCode::InvalidConfig, "duplicate submodule " + s.name);
    }
}

std::string CodeBundle::content_hash() const {
    Fnv1a h;
    for (const auto& [path, source] : files) h.field(path).field(source);
    return h.hex();
}

std::string TaskSpec::full_prompt() const {
    std::string out;
    for (const auto& [name, body] : prompt_parts) {
        if (!out.empty()) out += "\n\n";
        out += text::to_lower(name) == "description" && prompt_parts.size() == 1 ? body
                                                                                 : name + ":\n" + body;
    }
    return out;
}

}  // namespace garden
