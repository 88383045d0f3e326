#include "garden/engine/mock_engine.hpp"

#include <algorithm>

#include "garden/error.hpp"
#include "garden/util/fs.hpp"
#include "garden/util/hash.hpp"

namespace garden::engine {

namespace {

RunOutcome outcome_from(const std::string& s) {
    if (s == "Ran") return RunOutcome::Ran;
    if (s == "PlacementError") return RunOutcome::PlacementError;
    if (s == "Crashed") return RunOutcome::Crashed;
    fail(ErrorCode::CorruptDocument, "unknown mock run outcome " + s);
}

MockCompile compile_from(const nlohmann::json& j) {
    return {j.value("success", true), j.value("log", std::string())};
}

MockRun run_from(const nlohmann::json& j) {
    MockRun r;
    r.outcome = outcome_from(j.value("outcome", std::string("Ran")));
    r.log = j.value("log", std::string());
    r.crash_log = j.value("crash_log", std::string());
    r.placement_detail = j.value("placement_detail", std::string());
    return r;
}

MockImport import_from(const nlohmann::json& j) {
    return {j.value("ok", true), j.value("error", std::string())};
}

template <typename T>
T next(std::deque<T>& queue, const std::optional<T>& fallback, const char* op,
       std::map<std::string, std::size_t>& consumed) {
    if (!queue.empty()) {
        T v = std::move(queue.front());
        queue.pop_front();
        ++consumed[op];
        return v;
    }
    if (fallback) return *fallback;
    fail(ErrorCode::ScenarioExhausted, std::string("mock scenario has no ") + op + " entries left");
}

}  // namespace

MockScenario MockScenario::from_json(const nlohmann::json& doc) {
    MockScenario s;
    try {
        for (const auto& j : doc.value("compile", nlohmann::json::array())) s.compile.push_back(compile_from(j));
        for (const auto& j : doc.value("run", nlohmann::json::array())) s.run.push_back(run_from(j));
        for (const auto& j : doc.value("import", nlohmann::json::array())) s.import.push_back(import_from(j));
        if (doc.contains("compile_default")) s.compile_default = compile_from(doc["compile_default"]);
        if (doc.contains("run_default")) s.run_default = run_from(doc["run_default"]);
        if (doc.contains("import_default")) s.import_default = import_from(doc["import_default"]);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::CorruptDocument, std::string("mock scenario: ") + e.what());
    }
    return s;
}

std::string placeholder_frame(const std::string& seed, int frame) {
    constexpr int kWidth = 16;
    constexpr int kHeight = 9;
    std::string out = "P6\n16 9\n255\n";
    const auto base = fnv1a(seed + "#" + std::to_string(frame));
    for (int y = 0; y < kHeight; ++y) {
        for (int x = 0; x < kWidth; ++x) {
            out.push_back(static_cast<char>((base >> 8) + x * 13 + frame * 7));
            out.push_back(static_cast<char>((base >> 16) + y * 23));
            out.push_back(static_cast<char>((base >> 24) + (x + y) * 5));
        }
    }
    return out;
}

MockEngine::MockEngine(Workspace workspace, MockScenario scenario, bool isolates_processes)
    : workspace_(std::move(workspace)), scenario_(std::move(scenario)), isolates_(isolates_processes) {}

CompileReport MockEngine::compile_project(const CodeBundle& bundle, const std::string& task_key) {
    std::lock_guard lock(mu_);
    auto scripted = next(scenario_.compile, scenario_.compile_default, "compile", consumed_);
    compiles_.push_back({task_key, bundle});
    CompileReport report;
    report.success = scripted.success;
    report.log = scripted.log;
    if (!report.success && report.log.empty()) report.log = "error: build failed (mock)";
    if (report.log.empty()) report.log = "Build succeeded (mock) for " + task_key;
    last_compile_ok_ = report.success;
    if (report.success) {
        for (const auto& c : declared_actor_classes(bundle)) {
            if (std::find(known_classes_.begin(), known_classes_.end(), c) == known_classes_.end()) {
                known_classes_.push_back(c);
            }
        }
    }
    return report;
}

RunReport MockEngine::run_simulation(const LayoutSpec& layout, const RunTarget& target) {
    std::lock_guard lock(mu_);
    if (!last_compile_ok_) fail(ErrorCode::LaunchFailure, "project has not compiled successfully");
    auto scripted = next(scenario_.run, scenario_.run_default, "run", consumed_);
    runs_.push_back({layout, target});

    RunReport report;
    report.outcome = scripted.outcome;
    std::string log = "LogInit: mock editor starting for " + target.task_key + " attempt " +
                      std::to_string(target.attempt) + "\n";
    log += std::string(kInitBegin) + "\n";
    if (scripted.outcome == RunOutcome::PlacementError) {
        std::string detail = scripted.placement_detail;
        if (detail.empty()) {
            for (const auto& a : layout.actors) {
                if (std::find(known_classes_.begin(), known_classes_.end(), a.class_name) == known_classes_.end()) {
                    detail += "LogPython: Error: class '" + a.class_name + "' does not exist in the project\n";
                }
            }
            if (detail.empty()) detail = "LogPython: Error: placement script raised an exception\n";
        }
        log += detail;
        if (log.back() != '\n') log += "\n";
        log += std::string(kInitEnd) + " status=error\n";
        if (!scripted.log.empty()) log += scripted.log + "\n";
        report.runtime_log = log;
        report.placement_log_excerpt = extract_init_section(log);
        return report;
    }
    log += "LogPython: placed " + std::to_string(layout.actors.size()) + " actors\n";
    log += std::string(kInitEnd) + " status=ok\n";
    if (!scripted.log.empty()) log += scripted.log + "\n";

    if (scripted.outcome == RunOutcome::Crashed) {
        report.runtime_log = log;
        report.crash_log = scripted.crash_log;
        return report;
    }

    const auto dir = workspace_.screenshots_dir(target.task_key, target.attempt);
    const std::string seed = target.task_key + "/" + std::to_string(target.attempt);
    for (int i = 0; i < kScreenshotCount; ++i) {
        const int t = (i + 1) * kScreenshotIntervalSeconds;
        auto path = dir / ("frame_" + std::to_string(t) + "s.ppm");
        fs::write_file(path, placeholder_frame(seed, i));
        report.screenshots.push_back(path.string());
    }
    log += "LogSim: simulated 6.0 s, captured " + std::to_string(kScreenshotCount) + " frames\n";
    report.runtime_log = log;
    return report;
}

EngineAssetRef MockEngine::import_mesh(const std::filesystem::path& file) {
    std::lock_guard lock(mu_);
    if (!std::filesystem::exists(file)) fail(ErrorCode::MissingFile, file.string());
    if (!is_mesh_file(file)) fail(ErrorCode::UnsupportedFormat, file.string());
    auto scripted = next(scenario_.import, scenario_.import_default, "import", consumed_);
    if (!scripted.ok) fail(ErrorCode::AdapterError, "import failed: " + scripted.error);
    imports_.push_back(file);
    return {"/Game/Generated/" + file.stem().string()};
}

SessionHandle MockEngine::launch_user_session(const std::filesystem::path& source_dir,
                                              const std::filesystem::path& layout_file) {
    std::lock_guard lock(mu_);
    if (!std::filesystem::is_directory(source_dir)) fail(ErrorCode::SnapshotMissing, source_dir.string());
    SessionHandle h;
    h.session_id = "mock-session-" + std::to_string(sessions_.size() + 1);
    h.source_dir = source_dir;
    h.layout_file = layout_file;
    sessions_.push_back(h);
    return h;
}

void MockEngine::skip(const std::string& op, std::size_t n) {
    std::lock_guard lock(mu_);
    auto drop = [&](auto& queue) {
        auto k = std::min(n, queue.size());
        consumed_[op] += k;
        queue.erase(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(k));
    };
    if (op == "compile") {
        drop(scenario_.compile);
    } else if (op == "run") {
        drop(scenario_.run);
    } else if (op == "import") {
        drop(scenario_.import);
    } else {
        fail(ErrorCode::InvalidTarget, "unknown mock operation " + op);
    }
}

std::map<std::string, std::size_t> MockEngine::consumed() const {
    std::lock_guard lock(mu_);
    return consumed_;
}

std::vector<MockEngine::CompileCall> MockEngine::compiles() const {
    std::lock_guard lock(mu_);
    return compiles_;
}
std::vector<MockEngine::RunCall> MockEngine::runs() const {
    std::lock_guard lock(mu_);
    return runs_;
}
std::vector<std::filesystem::path> MockEngine::imports() const {
    std::lock_guard lock(mu_);
    return imports_;
}
std::vector<SessionHandle> MockEngine::sessions() const {
    std::lock_guard lock(mu_);
    return sessions_;
}

}  // namespace garden::engine
