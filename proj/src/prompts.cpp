#include "garden/prompts.hpp"

#include <sstream>

namespace garden::prompts {

namespace {

std::string disclaimer(const GardenConfig& config) {
    return config.test_disclaimer.empty() ? std::string() : "\n\n" + config.test_disclaimer;
}

std::string bounds(const GardenConfig& config) {
    std::ostringstream os;
    os << "The plan is a tree rooted at the seed (depth 0). It may be at most " << config.max_depth
       << " levels deep, and no step may have more than " << config.max_branching << " sub-steps.";
    return os.str();
}

}  // namespace

std::string roster_listing(const std::vector<SubmoduleDescriptor>& roster) {
    std::string out;
    for (const auto& s : roster) out += "- " + s.name + ": " + s.description + "\n";
    return out;
}

std::string broad_planner_system(const GardenConfig& config) {
    return "You are the lead designer of a small video game prototype that will be built in Unreal Engine 5.\n"
           "The user describes a dream, a memory, an imagined scenario or a rough game sketch. Restate it as a "
           "short outline of a game on a single line beginning with `OUTLINE:`. Then write a broad, high-level "
           "plan for implementing that game as a numbered list (`1. ...`, `2. ...`).\n\n" +
           bounds(config) +
           "\nEvery branch of the finished tree must end in a leaf: one concrete task for exactly one of the "
           "implementation submodules below.\n\n" +
           roster_listing(config.submodule_roster) +
           "\nIf a step is already a single task for one submodule, end it with `[LEAF: <submodule name>]`. "
           "Only use the submodules listed; never propose work they cannot do." +
           disclaimer(config);
}

std::string sub_planner_system(const GardenConfig& config) {
    return "You refine one step of a hierarchical plan for a video game prototype built in Unreal Engine 5.\n"
           "You are shown the whole plan tree so far. Re-articulate the marked step in more detail on a single "
           "line beginning with `DETAIL:`, then break it into a numbered list of sub-steps (`1. ...`).\n\n" +
           bounds(config) +
           "\nEvery branch must end in a leaf: one concrete task for exactly one of these submodules:\n\n" +
           roster_listing(config.submodule_roster) +
           "\nMark a sub-step as a leaf by ending it with `[LEAF: <submodule name>]`. Only use the submodules "
           "listed." +
           disclaimer(config);
}

std::string broad_planner_user(std::string_view seed) {
    return "Seed:\n" + std::string(seed);
}

std::string sub_planner_user(std::string_view plan_outline, int node_depth, const GardenConfig& config) {
    std::ostringstream os;
    os << "Current plan tree:\n" << plan_outline << "\n\nExpand the step marked `<== EXPAND`. Its sub-steps will "
       << "sit at depth " << node_depth + 1 << " of at most " << config.max_depth << ". Give at most "
       << config.max_branching << " sub-steps.";
    if (node_depth + 1 >= config.max_depth) os << " Every sub-step must be a leaf.";
    return os.str();
}

std::string roster_assign_system(const GardenConfig& config) {
    return "Each plan step below has been fixed as a leaf task. Assign every step to exactly one of these "
           "implementation submodules:\n\n" +
           roster_listing(config.submodule_roster) +
           "\nAnswer with one line per step in the form `<step number>. <submodule name>` and nothing else.";
}

std::string roster_assign_user(std::string_view plan_outline, const std::vector<std::string>& steps) {
    std::string out = "Plan tree:\n" + std::string(plan_outline) + "\n\nSteps to assign:\n";
    for (std::size_t i = 0; i < steps.size(); ++i) out += std::to_string(i + 1) + ". " + steps[i] + "\n";
    return out;
}

std::string reprompt_after_parse_failure(std::string_view reason) {
    return "Your previous answer could not be used: " + std::string(reason) +
           "\nAnswer again, following the required format exactly.";
}

std::string task_generator_system(const SubmoduleDescriptor& submodule) {
    std::string guide;
    switch (submodule.executor) {
        case Executor::CodeGenerator:
            guide =
                "Write two prompts. After a line `ACTOR:` write the prompt for the code generator: which Actor "
                "classes to write, their components, editable properties and per-tick behaviour, and which "
                "existing meshes or materials to use. After a line `SPAWNER:` write the prompt for the layout "
                "generator: how many instances of each actor to place, where (in centimeters), and with which "
                "initial property values.";
            break;
        case Executor::ProceduralMesh:
            guide =
                "After a line `ACTOR:` write a prompt asking for one Actor that builds a procedural mesh for the "
                "structure or terrain. Describe its shape, extent in centimeters, resolution and material.";
            break;
        case Executor::DiffusionMesh:
            guide =
                "Write a detailed visual description of a single object to be generated as a textured 3D mesh: "
                "shape, proportions, materials, colours and style. Describe only the object.";
            break;
        case Executor::MeshDownloader:
            guide =
                "Write a concise description (a few words) of the common object to retrieve from an asset "
                "database, for example `a low-poly sheep`.";
            break;
    }
    return "You turn a leaf step of a game implementation plan into the input for the `" + submodule.name +
           "` submodule (" + submodule.description + ")\n\n" + guide;
}

std::string task_generator_user(std::string_view plan_outline, std::string_view leaf_text,
                                const SubmoduleDescriptor& submodule) {
    return "Plan tree:\n" + std::string(plan_outline) + "\n\nLeaf step for `" + submodule.name + "`:\n" +
           std::string(leaf_text);
}

std::string procedural_cube_exemplar() {
    return R"cpp(// FILE: Source/Generated/ProceduralCube.h
#pragma once
#include "CoreMinimal.h"
#include "GameFramework/Actor.h"
#include "ProceduralMeshComponent.h"
#include "ProceduralCube.generated.h"

UCLASS()
class AProceduralCube : public AActor
{
    GENERATED_BODY()
public:
    AProceduralCube();
protected:
    virtual void OnConstruction(const FTransform& Transform) override;
    UPROPERTY(VisibleAnywhere) UProceduralMeshComponent* Mesh;
    UPROPERTY(EditAnywhere) float HalfExtent = 50.f;
};

// FILE: Source/Generated/ProceduralCube.cpp
#include "ProceduralCube.h"

AProceduralCube::AProceduralCube()
{
    Mesh = CreateDefaultSubobject<UProceduralMeshComponent>(TEXT("Mesh"));
    RootComponent = Mesh;
}

void AProceduralCube::OnConstruction(const FTransform& Transform)
{
    const float H = HalfExtent;
    TArray<FVector> V = {{-H,-H,-H},{H,-H,-H},{H,H,-H},{-H,H,-H},{-H,-H,H},{H,-H,H},{H,H,H},{-H,H,H}};
    TArray<int32> T = {0,2,1, 0,3,2, 4,5,6, 4,6,7, 0,1,5, 0,5,4, 1,2,6, 1,6,5, 2,3,7, 2,7,6, 3,0,4, 3,4,7};
    Mesh->CreateMeshSection(0, V, T, {}, {}, {}, {}, true);
}
)cpp";
}

std::string code_generator_system(const CodeContext& context, bool procedural_mesh) {
    std::string out =
        "You write complete, compilable C++ Actor classes for an Unreal Engine 5 project.\n"
        "Rules:\n"
        "- Output every file in full inside a fenced code block whose first line is `// FILE: <relative path>` "
        "(paths under Source/Generated/).\n"
        "- Each Actor needs a header with UCLASS()/GENERATED_BODY() and a matching .cpp.\n"
        "- Expose tunable values as UPROPERTY(EditAnywhere) so a layout can set them.\n"
        "- Do not define a class named FilmCamera; it is reserved.\n"
        "- Only reference assets listed below, by their exact paths.\n";
    if (procedural_mesh) {
        out += "\nWrite an Actor that generates a procedural mesh (UProceduralMeshComponent). A single instance "
               "will be placed at the origin for inspection. Example of a procedural cube:\n\n" +
               procedural_cube_exemplar();
    }
    out += "\nStarter content available:\n";
    if (context.starter_content.empty()) out += "(none)\n";
    for (const auto& s : context.starter_content) out += "- " + s + "\n";
    out += "\nMeshes generated or downloaded earlier in this project:\n";
    if (context.generated_assets.empty()) out += "(none)\n";
    for (const auto& s : context.generated_assets) out += "- " + s + "\n";
    return out;
}

std::string layout_generator_system() {
    return "You place instances of freshly written Unreal Engine actor classes in a level.\n"
           "One Unreal unit is one centimeter. Rotation is pitch, yaw, roll in degrees; scale is unitless and "
           "positive.\n"
           "Answer with a single JSON document of the form\n"
           "{\"actors\": [{\"class\": \"<class name>\", \"position\": [x, y, z], \"rotation\": [p, y, r], "
           "\"scale\": [x, y, z], \"properties\": {\"<editable property>\": <value>}}]}\n"
           "Only use class names defined in the code you are shown or listed as existing assets.";
}

std::string compile_eval_system() {
    return "You review the build log of generated Unreal Engine C++ code.\n"
           "Start your answer with a line `VERDICT: PASS` if the build succeeded (warnings are acceptable) or "
           "`VERDICT: FAIL` otherwise. On failure, explain which errors occurred, where, and how to fix them.";
}

std::string placement_eval_system() {
    return "The level initialization script failed while placing generated actors from a layout.\n"
           "Start your answer with `VERDICT: FAIL`, then explain the cause (for example a class name in the "
           "layout that does not exist in the code) and how the code or layout should change.";
}

std::string crash_eval_system() {
    return "The Unreal Editor crashed while simulating generated actors.\n"
           "Start your answer with `VERDICT: FAIL`, then diagnose the crash from the log and give concrete "
           "guidance for fixing the code or layout.";
}

std::string visual_eval_system() {
    return "You judge whether a generated Unreal Engine scene fulfils its task.\n"
           "You receive six screenshots taken one second apart during the first six seconds of simulation, the "
           "runtime log, the actor code, the layout and the task prompt.\n"
           "Start your answer with `VERDICT: PASS` or `VERDICT: FAIL`. On failure, describe what is wrong in the "
           "images and what to change.";
}

std::string mesh_prompt_augmentation() {
    return "Show exactly one object, fully visible and posed against a plain blank white background, centered, "
           "with soft even lighting and no other objects, text or shadows.";
}

}  // namespace garden::prompts
