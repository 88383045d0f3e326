#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "garden/engine/adapter.hpp"

namespace garden::engine {

struct MockCompile {
    bool success = true;
    std::string log;
};

struct MockRun {
    RunOutcome outcome = RunOutcome::Ran;
    std::string log;               // extra runtime log lines
    std::string crash_log;         // Crashed only
    std::string placement_detail;  // PlacementError only; generated from the layout when empty
};

struct MockImport {
    bool ok = true;
    std::string error;
};

// Scripted per-invocation results, consumed FIFO per operation. When a queue
// runs dry the matching `*_default` is used if set, otherwise the call throws
// ScenarioExhausted.
struct MockScenario {
    std::deque<MockCompile> compile;
    std::deque<MockRun> run;
    std::deque<MockImport> import;
    std::optional<MockCompile> compile_default;
    std::optional<MockRun> run_default;
    std::optional<MockImport> import_default;

    // {"compile":[{"success":bool,"log":str}], "run":[{"outcome":"Ran|PlacementError|Crashed", ...}],
    //  "import":[{"ok":bool,"error":str}], "compile_default":{...}, "run_default":{...}, "import_default":{...}}
    static MockScenario from_json(const nlohmann::json& doc);
};

// Deterministic engine stand-in. Writes placeholder screenshots (16:9 PPM
// frames) so that downstream code handles real files.
class MockEngine : public EngineAdapter {
public:
    struct CompileCall {
        std::string task_key;
        CodeBundle bundle;
    };
    struct RunCall {
        LayoutSpec layout;
        RunTarget target;
    };

    MockEngine(Workspace workspace, MockScenario scenario, bool isolates_processes = true);

    const Workspace& workspace() const override { return workspace_; }
    CompileReport compile_project(const CodeBundle& bundle, const std::string& task_key) override;
    RunReport run_simulation(const LayoutSpec& layout, const RunTarget& target) override;
    EngineAssetRef import_mesh(const std::filesystem::path& file) override;
    SessionHandle launch_user_session(const std::filesystem::path& source_dir,
                                      const std::filesystem::path& layout_file) override;
    bool isolates_processes() const override { return isolates_; }

    // Consumes the first n scripted entries of an operation ("compile", "run", "import").
    void skip(const std::string& op, std::size_t n);

    // Scripted entries used or skipped so far, per operation.
    std::map<std::string, std::size_t> consumed() const;
    std::vector<CompileCall> compiles() const;
    std::vector<RunCall> runs() const;
    std::vector<std::filesystem::path> imports() const;
    std::vector<SessionHandle> sessions() const;

private:
    mutable std::mutex mu_;
    Workspace workspace_;
    MockScenario scenario_;
    bool isolates_;
    bool last_compile_ok_ = false;
    std::vector<std::string> known_classes_;
    std::vector<CompileCall> compiles_;
    std::vector<RunCall> runs_;
    std::vector<std::filesystem::path> imports_;
    std::vector<SessionHandle> sessions_;
    std::map<std::string, std::size_t> consumed_;
};

// Deterministic 16x9 placeholder frame for capture index `frame` (0-based).
std::string placeholder_frame(const std::string& seed, int frame);

}  // namespace garden::engine
