#include <doctest.h>

#include "garden/codegen/evaluators.hpp"
#include "garden/codegen/extract.hpp"
#include "garden/codegen/layout.hpp"
#include "garden/codegen/pipeline.hpp"
#include "garden/engine/mock_engine.hpp"
#include "garden/error.hpp"
#include "garden/llm/replay_provider.hpp"
#include "garden/util/fs.hpp"
#include "support.hpp"

using namespace garden;
using namespace garden::codegen;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IoError;
}

const char* kFoxCode =
    "Here is the fox.\n\n"
    "```cpp\n// FILE: Fox.h\nclass AFox : public AActor {};\n```\n";

TaskSpec fox_task() {
    TaskSpec t;
    t.leaf_id = NodeId{2};
    t.submodule = "code_generator";
    t.prompt_parts = {{"actor", "Write AFox."}, {"spawner", "Place three foxes."}};
    return t;
}

}  // namespace

TEST_CASE("code files from both annotation styles") {
    auto b = parse_code_files(
        "Intro\n"
        "```cpp\n\n// FILE: Source/Fox.h\nclass AFox;\n```\n"
        "### `Source/Fox.cpp`\n"
        "```cpp\n#include \"Fox.h\"\n```\n"
        "```\nunannotated\n```\n"
        "### stale.h\nsome prose\n```cpp\nnot stale\n```\n");
    CHECK(b.files.size() == 2);
    CHECK(b.files.at("Source/Fox.h") == "class AFox;\n");
    CHECK(b.files.at("Source/Fox.cpp") == "#include \"Fox.h\"\n");
    CHECK(code_of([] { parse_code_files("```\n// FILE: ../evil.h\nx\n```"); }) == ErrorCode::PathViolation);
    CHECK(code_of([] { parse_code_files("no code at all"); }) == ErrorCode::NoFilesFound);
}

TEST_CASE("relative path normalization") {
    CHECK(checked_relative_path(" ./Source\\Fox//Fox.h ") == "Source/Fox/Fox.h");
    CHECK(code_of([] { checked_relative_path("/etc/passwd"); }) == ErrorCode::PathViolation);
    CHECK(code_of([] { checked_relative_path("C:/x.h"); }) == ErrorCode::PathViolation);
    CHECK(code_of([] { checked_relative_path("a/../../b"); }) == ErrorCode::PathViolation);
    CHECK(code_of([] { checked_relative_path("./"); }) == ErrorCode::PathViolation);
}

TEST_CASE("verdict lines") {
    auto v = parse_verdict("Looking at the frames.\n**VERDICT: pass**\nSheep visible.");
    REQUIRE(v);
    CHECK(v->verdict == Verdict::Pass);
    CHECK(v->feedback == "Looking at the frames.\nSheep visible.");
    CHECK(parse_verdict("> Verdict : FAIL\nno sheep")->verdict == Verdict::Fail);
    CHECK_FALSE(parse_verdict("I think it passes").has_value());
}

TEST_CASE("evaluators degrade to Fail with feedback") {
    llm::ReplayProvider p;
    CodeBundle b;
    b.files["Fox.h"] = "class AFox : public AActor {};";
    p.push("compile_eval", "The build looks fine to me");
    auto r = eval_compile_log(p, "error C2065: BuildHills undeclared", b, "task");
    CHECK(r.verdict == Verdict::Fail);
    CHECK(r.feedback.find("BuildHills") != std::string::npos);

    p.push("placement_eval", "VERDICT: FAIL");
    r = eval_placement(p, "class AWolf missing", b, default_layout("AFox"), "task");
    CHECK(r.source_stage == SourceStage::Placement);
    CHECK(r.feedback.find("AWolf") != std::string::npos);

    r = eval_crash_log(p, "   ", b, default_layout("AFox"), "task");
    CHECK(r.source_stage == SourceStage::Crash);
    CHECK(p.captured("crash_eval").empty());
    CHECK_FALSE(r.feedback.empty());
}

TEST_CASE("visual evaluation sends exactly six frames") {
    testing::TempDir tmp("visual");
    std::vector<std::string> shots;
    for (int i = 1; i <= 6; ++i) {
        auto f = tmp / ("frame_" + std::to_string(i) + "s.png");
        fs::write_file(f, "png" + std::to_string(i));
        shots.push_back(f.string());
    }
    llm::ReplayProvider p;
    p.push("visual_eval", "VERDICT: PASS\nfoxes everywhere", 6);
    auto r = eval_visual(p, shots, "log", {}, default_layout("AFox"), "task");
    CHECK(r.verdict == Verdict::Pass);
    auto req = p.captured("visual_eval").at(0).request;
    REQUIRE(req.images.size() == 6);
    CHECK(req.images[2].bytes == "png3");
    CHECK(req.images[0].mime == "image/png");
    CHECK(req.temperature == llm::kEvaluatorTemperature);

    shots.pop_back();
    CHECK(code_of([&] { eval_visual(p, shots, "log", {}, default_layout("AFox"), "task"); }) ==
          ErrorCode::PreconditionViolation);
    CHECK(image_mime_for("a/B.JPG") == "image/jpeg");
}

TEST_CASE("layout documents") {
    LayoutSpec l;
    ActorPlacement a;
    a.class_name = "AFox";
    a.position = {1.5, -2, 0.1};
    a.scale = {2, 2, 2};
    a.properties = {{"speed", 3.25}, {"name", std::string("red")}, {"count", std::int64_t{4}}, {"wild", true}};
    l.actors = {a, a};
    const auto doc = serialize_layout(l);
    CHECK(parse_layout_document(doc) == l);
    CHECK(serialize_layout(parse_layout_document(doc)) == doc);
    CHECK(doc.find("\"class\"") < doc.find("\"position\""));

    CHECK(parse_layout("Sure:\n```json\n{\"note\": 1}\n{\"actors\": [{\"class\": \"AFox\"}]}\n```") ==
          default_layout("AFox"));
    CHECK(code_of([] { parse_layout("nothing here"); }) == ErrorCode::NoLayoutFound);
    CHECK(code_of([] { parse_layout(R"({"actors": [{"class": "AFox", "scale": [1, 0, 1]}]})"); }) ==
          ErrorCode::MalformedLayout);
    CHECK(code_of([] { parse_layout_document(R"({"actors": [{"class": ""}]})"); }) == ErrorCode::MalformedLayout);
    CHECK(code_of([] { parse_layout_document(R"({"actors": [{"class": "A", "position": [1, 2]}]})"); }) ==
          ErrorCode::MalformedLayout);
}

TEST_CASE("pipeline retries with feedback and stops on a visual pass") {
    testing::TempDir tmp("pipeline");
    engine::MockScenario sc;
    sc.compile = {{false, "error: AFox.h(1): missing semicolon"}, {true, ""}, {true, ""}};
    sc.run = {{engine::RunOutcome::PlacementError, "", "", ""}, {engine::RunOutcome::Ran, "", "", ""}};
    engine::MockEngine eng(engine::Workspace{tmp.path()}, sc);

    llm::ReplayProvider p;
    for (int i = 0; i < 3; ++i) p.push("code_generator", kFoxCode);
    p.push("compile_eval", "VERDICT: FAIL\nAdd the semicolon.");
    p.push("layout_generator", R"({"actors": [{"class": "AWolf"}]})");
    p.push("placement_eval", "VERDICT: FAIL\nAWolf does not exist; use AFox.");
    p.push("layout_generator", R"({"actors": [{"class": "AFox"}, {"class": "AFox", "position": [100, 0, 0]}]})");
    p.push("visual_eval", "VERDICT: PASS\nTwo foxes.", 6);

    CodegenPipeline pipe(p, eng);
    auto result = pipe.run_code_task(fox_task(), "task-3", {}, 3);
    CHECK(result.passed);
    REQUIRE(result.attempts.size() == 3);
    CHECK(result.attempts[0].evaluation.source_stage == SourceStage::Compile);
    CHECK(result.attempts[0].attempt.stage_reached == Stage::Generated);
    CHECK(result.attempts[1].evaluation.source_stage == SourceStage::Placement);
    CHECK(result.attempts[1].attempt.compiled);
    CHECK(result.attempts[2].attempt.stage_reached == Stage::VisuallyEvaluated);
    CHECK(result.attempts[2].attempt.screenshots.size() == 6);
    CHECK(result.attempts[2].attempt.screenshots[0] == "screenshots/task-3/3/frame_1s.ppm");
    CHECK(std::filesystem::exists(tmp / "source" / "task-3" / "Fox.h"));
    CHECK(std::filesystem::exists(tmp / "layouts" / "task-3_3.json"));

    auto second = p.captured("code_generator")[1].request.transcript();
    CHECK(second.find("failed at the Compile stage") != std::string::npos);
    CHECK(second.find("Add the semicolon.") != std::string::npos);
    auto third_layout = p.captured("layout_generator")[1].request.transcript();
    CHECK(third_layout.find("use AFox") != std::string::npos);
    CHECK(p.remaining_total() == 0);
}

TEST_CASE("pipeline failures stay inside the attempt") {
    testing::TempDir tmp("pipeline-fail");
    engine::MockScenario sc;
    sc.compile_default = engine::MockCompile{true, ""};
    sc.run = {{engine::RunOutcome::Crashed, "", "", ""}};
    engine::MockEngine eng(engine::Workspace{tmp.path()}, sc);
    llm::ReplayProvider p;
    p.push("code_generator", "I cannot write code today.");
    p.push("code_generator", "```cpp\n// FILE: Mesh.cpp\nvoid build();\n```");
    p.push("code_generator", kFoxCode);

    CodegenPipeline pipe(p, eng);
    auto result = pipe.run_procedural_mesh_task(fox_task(), "task-4", {}, 3);
    CHECK_FALSE(result.passed);
    REQUIRE(result.attempts.size() == 3);
    CHECK(result.attempts[0].evaluation.source_stage == SourceStage::Generation);
    CHECK(result.attempts[1].evaluation.source_stage == SourceStage::Placement);
    CHECK(result.attempts[1].evaluation.feedback.find("No actor class") != std::string::npos);
    // Crash with an empty log needs no evaluator call.
    CHECK(result.attempts[2].evaluation.source_stage == SourceStage::Crash);
    CHECK(eng.runs().at(0).layout == default_layout("AFox"));
    CHECK(p.captured("crash_eval").empty());

    // Script errors are not attempt failures.
    llm::ReplayProvider empty;
    CodegenPipeline pipe2(empty, eng);
    CHECK(code_of([&] { pipe2.run_code_task(fox_task(), "task-5", {}, 3); }) == ErrorCode::ScriptExhausted);
}
