#include <doctest.h>

#include "garden/engine/command_engine.hpp"
#include "garden/engine/mock_engine.hpp"
#include "garden/engine/process.hpp"
#include "garden/error.hpp"
#include "garden/util/fs.hpp"
#include "support.hpp"

using namespace garden;
using namespace garden::engine;

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

CodeBundle sheep_bundle() {
    CodeBundle b;
    b.files["Sheep.h"] = "UCLASS()\nclass GARDEN_API ASheep : public AActor {\n};\n";
    b.files["Dog.h"] = "class ADog final : public APawn {};\nclass ASheep : public AActor {};\n";
    return b;
}

LayoutSpec layout_of(std::initializer_list<const char*> classes) {
    LayoutSpec l;
    for (auto c : classes) l.actors.push_back({c});
    return l;
}

}  // namespace

TEST_CASE("init section extraction") {
    const std::string log = "noise\n[garden-init] BEGIN\nplaced 2\n[garden-init] END status=ok\ntail\n";
    CHECK(extract_init_section(log) == "[garden-init] BEGIN\nplaced 2\n[garden-init] END status=ok");
    CHECK_FALSE(init_section_failed(log));
    CHECK(init_section_failed("[garden-init] BEGIN\nTraceback\n"));
    CHECK(extract_init_section("[garden-init] BEGIN\nTraceback") == "[garden-init] BEGIN\nTraceback");
    CHECK(init_section_failed("[garden-init] BEGIN\n[garden-init] END status=error\n"));
    CHECK_FALSE(extract_init_section("no markers").has_value());
}

TEST_CASE("declared actor classes and mesh extensions") {
    auto b = sheep_bundle();
    // map order: Dog.h then Sheep.h
    CHECK(declared_actor_classes(b) == std::vector<std::string>{"ADog", "ASheep"});
    CHECK(is_mesh_file("x/Hay.GLB"));
    CHECK(is_mesh_file("rock.obj"));
    CHECK_FALSE(is_mesh_file("rock.png"));
}

TEST_CASE("run report validation") {
    RunReport r;
    CHECK(code_of([&] { r.validate(); }) == ErrorCode::PreconditionViolation);
    r.screenshots.assign(6, "f.ppm");
    CHECK_NOTHROW(r.validate());
    r.outcome = RunOutcome::Crashed;
    CHECK(code_of([&] { r.validate(); }) == ErrorCode::PreconditionViolation);
    r.crash_log = "boom";
    CHECK_NOTHROW(r.validate());
}

TEST_CASE("mock engine follows its scenario") {
    testing::TempDir tmp("mock");
    MockScenario s = MockScenario::from_json(nlohmann::json::parse(R"({
        "compile": [{"success": false}, {"success": true}],
        "run": [{"outcome": "PlacementError"}, {"outcome": "Crashed", "crash_log": "segfault"}, {"outcome": "Ran"}],
        "import": [{"ok": false, "error": "bad uv"}],
        "import_default": {"ok": true}
    })"));
    MockEngine e(Workspace{tmp.path()}, s);

    auto c = e.compile_project(sheep_bundle(), "task-1");
    CHECK_FALSE(c.success);
    CHECK(c.log.find("error") != std::string::npos);
    CHECK(code_of([&] { e.run_simulation(layout_of({"ASheep"}), {"task-1", 1}); }) == ErrorCode::LaunchFailure);
    CHECK(e.compile_project(sheep_bundle(), "task-1").success);

    auto placement = e.run_simulation(layout_of({"ASheep", "AWolf"}), {"task-1", 1});
    CHECK(placement.outcome == RunOutcome::PlacementError);
    REQUIRE(placement.placement_log_excerpt);
    CHECK(placement.placement_log_excerpt->find("AWolf") != std::string::npos);
    CHECK(placement.placement_log_excerpt->find("ASheep") == std::string::npos);

    auto crashed = e.run_simulation(layout_of({"ASheep"}), {"task-1", 2});
    CHECK(crashed.crash_log == "segfault");

    auto ran = e.run_simulation(layout_of({"ASheep"}), {"task-1", 3});
    CHECK_NOTHROW(ran.validate());
    REQUIRE(ran.screenshots.size() == 6);
    CHECK(ran.screenshots.back().find("frame_6s.ppm") != std::string::npos);
    CHECK(fs::read_file(ran.screenshots[0]) == placeholder_frame("task-1/3", 0));
    CHECK(code_of([&] { e.run_simulation(layout_of({}), {"task-1", 4}); }) == ErrorCode::ScenarioExhausted);

    fs::write_file(tmp / "hay.obj", "v 0 0 0\n");
    fs::write_file(tmp / "hay.png", "png");
    CHECK(code_of([&] { e.import_mesh(tmp / "hay.png"); }) == ErrorCode::UnsupportedFormat);
    CHECK(code_of([&] { e.import_mesh(tmp / "gone.obj"); }) == ErrorCode::MissingFile);
    CHECK(code_of([&] { e.import_mesh(tmp / "hay.obj"); }) == ErrorCode::AdapterError);
    CHECK(e.import_mesh(tmp / "hay.obj").reference == "/Game/Generated/hay");
    CHECK(e.consumed().at("compile") == 2);
    CHECK(e.consumed().at("run") == 3);
}

TEST_CASE("mock scenario skip and parse errors") {
    testing::TempDir tmp("mock-skip");
    MockScenario s;
    s.compile = {{false, ""}, {true, ""}};
    MockEngine e(Workspace{tmp.path()}, s);
    e.skip("compile", 1);
    CHECK(e.compile_project({}, "t").success);
    CHECK(code_of([&] { e.skip("render", 1); }) == ErrorCode::InvalidTarget);
    CHECK(code_of([] { MockScenario::from_json(nlohmann::json::parse(R"({"run":[{"outcome":"Exploded"}]})")); }) ==
          ErrorCode::CorruptDocument);
    CHECK(code_of([&] { e.launch_user_session(tmp / "missing", tmp / "l.json"); }) == ErrorCode::SnapshotMissing);
}

TEST_CASE("placeholders are shell quoted") {
    CHECK(expand_placeholders("build {task} --in {source} {task}", {{"task", "t 1"}, {"source", "it's"}}) ==
          "build 't 1' --in 'it'\\''s' 't 1'");
    CHECK(expand_placeholders("{unknown}", {}) == "{unknown}");
}

TEST_CASE("process runner captures output and kills on timeout") {
    testing::TempDir tmp("proc");
    auto ok = run_shell("echo out; echo err >&2; exit 3", tmp / "a.log", std::chrono::seconds(10));
    CHECK(ok.exit_code == 3);
    CHECK_FALSE(ok.timed_out);
    CHECK(ok.output.find("out") != std::string::npos);
    CHECK(ok.output.find("err") != std::string::npos);

    const auto start = std::chrono::steady_clock::now();
    auto slow = run_shell("echo started; sleep 30", tmp / "b.log", std::chrono::milliseconds(200),
                          std::chrono::milliseconds(200));
    CHECK(slow.timed_out);
    CHECK(slow.exit_code == -1);
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));

    int pid = spawn_shell("sleep 30", tmp / "c.log");
    CHECK(is_alive(pid));
    CHECK(terminate_group(pid, std::chrono::milliseconds(200)));
    CHECK_FALSE(is_alive(pid));
}

TEST_CASE("command engine drives shell tools") {
    testing::TempDir tmp("cmd");
    const auto run_script = tmp / "run.sh";
    fs::write_file(run_script,
                   "#!/bin/sh\n"
                   "echo '[garden-init] BEGIN'\n"
                   "if grep -q AWolf \"$1\"; then echo 'no class AWolf'; echo '[garden-init] END status=error'; "
                   "exit 1; fi\n"
                   "echo '[garden-init] END status=ok'\n"
                   "if [ \"$3\" = 2 ]; then echo crash; exit 9; fi\n"
                   "for i in 1 2 3 4 5 6; do echo P3 > \"$2/frame_${i}s.ppm\"; done\n");
    CommandEngineConfig cfg;
    cfg.build_command = "test -d {source} && echo built {task}";
    cfg.run_command = "sh " + run_script.string() + " {layout} {screenshots} {attempt}";
    cfg.import_command = "echo importing; echo /Game/Imported/{file}";
    cfg.session_command = "sleep 30";
    CommandEngine e(Workspace{tmp / "ws"}, cfg);

    CHECK_FALSE(e.compile_project({}, "task-1").success);
    std::filesystem::create_directories(tmp / "ws" / "source");
    auto c = e.compile_project({}, "task-1");
    CHECK(c.success);
    CHECK(c.log.find("built task-1") != std::string::npos);

    auto ran = e.run_simulation(layout_of({"ASheep"}), {"task-1", 1});
    CHECK(ran.outcome == RunOutcome::Ran);
    CHECK(ran.screenshots.size() == 6);
    auto crashed = e.run_simulation(layout_of({"ASheep"}), {"task-1", 2});
    CHECK(crashed.outcome == RunOutcome::Crashed);
    CHECK(crashed.crash_log->find("crash") != std::string::npos);
    auto placement = e.run_simulation(layout_of({"AWolf"}), {"task-1", 3});
    CHECK(placement.outcome == RunOutcome::PlacementError);
    CHECK(placement.placement_log_excerpt->find("no class AWolf") != std::string::npos);

    fs::write_file(tmp / "hay.obj", "v 0 0 0\n");
    CHECK(e.import_mesh(tmp / "hay.obj").reference.find("/Game/Imported/") == 0);

    auto h = e.launch_user_session(tmp.path(), tmp / "l.json");
    CHECK(e.live_sessions().count(h.pid) == 1);
    e.close_sessions();
    CHECK(e.live_sessions().empty());

    CommandEngine missing(Workspace{tmp / "ws2"}, CommandEngineConfig{"definitely-not-a-tool-xyz"});
    CHECK(code_of([&] { missing.compile_project({}, "t"); }) == ErrorCode::ToolchainMissing);
    CHECK(code_of([&] { missing.launch_user_session(tmp.path(), tmp.path()); }) == ErrorCode::EngineUnavailable);
}
