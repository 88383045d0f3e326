#include "garden/engine/command_engine.hpp"

#include <algorithm>

#include "garden/codegen/layout.hpp"
#include "garden/engine/process.hpp"
#include "garden/error.hpp"
#include "garden/util/fs.hpp"
#include "garden/util/text.hpp"

namespace garden::engine {

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    return out + "'";
}

}  // namespace

std::string expand_placeholders(std::string command, const std::map<std::string, std::string>& values) {
    for (const auto& [key, value] : values) {
        const std::string token = "{" + key + "}";
        for (auto pos = command.find(token); pos != std::string::npos; pos = command.find(token, pos)) {
            auto quoted = shell_quote(value);
            command.replace(pos, token.size(), quoted);
            pos += quoted.size();
        }
    }
    return command;
}

CommandEngine::CommandEngine(Workspace workspace, CommandEngineConfig config)
    : workspace_(std::move(workspace)), config_(std::move(config)) {}

CommandEngine::~CommandEngine() { close_sessions(); }

CompileReport CommandEngine::compile_project(const CodeBundle&, const std::string& task_key) {
    if (config_.build_command.empty()) fail(ErrorCode::ToolchainMissing, "no build command configured");
    auto cmd = expand_placeholders(config_.build_command, {{"workspace", workspace_.root.string()},
                                                          {"source", workspace_.source_dir().string()},
                                                          {"task", task_key}});
    auto result = run_shell(cmd, workspace_.root / "logs" / ("build_" + task_key + ".log"), config_.build_timeout);
    if (result.exit_code == 127) fail(ErrorCode::ToolchainMissing, text::tail(result.output, 2000));
    CompileReport report;
    report.success = result.exit_code == 0;
    report.log = result.output;
    if (result.timed_out) report.log += "\nbuild timed out";
    if (!report.success && text::trim(report.log).empty()) {
        report.log = "build failed with exit code " + std::to_string(result.exit_code);
    }
    return report;
}

RunReport CommandEngine::run_simulation(const LayoutSpec& layout, const RunTarget& target) {
    if (config_.run_command.empty()) fail(ErrorCode::LaunchFailure, "no run command configured");
    const auto layout_file =
        workspace_.layouts_dir() / (target.task_key + "_" + std::to_string(target.attempt) + ".json");
    fs::write_file(layout_file, codegen::serialize_layout(layout));
    const auto shots = workspace_.screenshots_dir(target.task_key, target.attempt);
    std::filesystem::create_directories(shots);
    auto cmd = expand_placeholders(config_.run_command, {{"workspace", workspace_.root.string()},
                                                        {"source", workspace_.source_dir().string()},
                                                        {"task", target.task_key},
                                                        {"attempt", std::to_string(target.attempt)},
                                                        {"layout", layout_file.string()},
                                                        {"screenshots", shots.string()}});
    auto log_file = workspace_.root / "logs" /
                    ("run_" + target.task_key + "_" + std::to_string(target.attempt) + ".log");
    auto result = run_shell(cmd, log_file, config_.run_timeout);

    RunReport report;
    report.runtime_log = result.output;
    if (init_section_failed(result.output)) {
        report.outcome = RunOutcome::PlacementError;
        report.placement_log_excerpt = extract_init_section(result.output);
        return report;
    }
    if (result.exit_code != 0) {
        report.outcome = RunOutcome::Crashed;
        report.crash_log = result.timed_out ? "engine timed out\n" + text::tail(result.output, 8000)
                                            : text::tail(result.output, 8000);
        return report;
    }
    std::vector<std::string> frames;
    for (const auto& e : std::filesystem::directory_iterator(shots)) {
        if (e.is_regular_file()) frames.push_back(e.path().string());
    }
    std::sort(frames.begin(), frames.end());
    if (frames.size() != static_cast<std::size_t>(kScreenshotCount)) {
        report.outcome = RunOutcome::Crashed;
        report.crash_log = "capture produced " + std::to_string(frames.size()) + " screenshots, expected " +
                           std::to_string(kScreenshotCount) + "\n" + text::tail(result.output, 4000);
        return report;
    }
    report.outcome = RunOutcome::Ran;
    report.screenshots = std::move(frames);
    return report;
}

EngineAssetRef CommandEngine::import_mesh(const std::filesystem::path& file) {
    if (!std::filesystem::exists(file)) fail(ErrorCode::MissingFile, file.string());
    if (!is_mesh_file(file)) fail(ErrorCode::UnsupportedFormat, file.string());
    if (config_.import_command.empty()) fail(ErrorCode::ToolchainMissing, "no import command configured");
    auto cmd = expand_placeholders(config_.import_command,
                                   {{"workspace", workspace_.root.string()}, {"file", file.string()}});
    auto result = run_shell(cmd, workspace_.root / "logs" / ("import_" + file.stem().string() + ".log"),
                            config_.import_timeout);
    if (result.exit_code != 0) fail(ErrorCode::AdapterError, "import failed: " + text::tail(result.output, 2000));
    auto lines = text::split_lines(result.output);
    while (!lines.empty() && text::trim(lines.back()).empty()) lines.pop_back();
    return {lines.empty() ? file.stem().string() : text::trim(lines.back())};
}

SessionHandle CommandEngine::launch_user_session(const std::filesystem::path& source_dir,
                                                 const std::filesystem::path& layout_file) {
    if (config_.session_command.empty()) fail(ErrorCode::EngineUnavailable, "no session command configured");
    std::lock_guard lock(mu_);
    SessionHandle h;
    h.session_id = "session-" + std::to_string(++session_counter_);
    h.source_dir = source_dir;
    h.layout_file = layout_file;
    auto cmd = expand_placeholders(config_.session_command, {{"workspace", workspace_.root.string()},
                                                            {"source", source_dir.string()},
                                                            {"layout", layout_file.string()}});
    h.pid = spawn_shell(cmd, workspace_.root / "logs" / (h.session_id + ".log"));
    sessions_.insert(h.pid);
    return h;
}

void CommandEngine::close_sessions() {
    std::lock_guard lock(mu_);
    for (int pid : sessions_) terminate_group(pid);
    sessions_.clear();
}

std::set<int> CommandEngine::live_sessions() const {
    std::lock_guard lock(mu_);
    std::set<int> out;
    for (int pid : sessions_) {
        if (is_alive(pid)) out.insert(pid);
    }
    return out;
}

}  // namespace garden::engine
