#pragma once

#include <chrono>
#include <mutex>
#include <map>
#include <set>
#include <string>

#include "garden/engine/adapter.hpp"

namespace garden::engine {

// Shell command templates for a real engine install. Placeholders:
// {workspace} {source} {task} {attempt} {layout} {screenshots} {file}.
struct CommandEngineConfig {
    std::string build_command;
    std::string run_command;     // must print the init-script markers and write 6 frames to {screenshots}
    std::string import_command;  // prints the engine asset reference on its last output line
    std::string session_command;
    std::chrono::milliseconds build_timeout{std::chrono::minutes(20)};
    std::chrono::milliseconds run_timeout{std::chrono::minutes(5)};
    std::chrono::milliseconds import_timeout{std::chrono::minutes(5)};
};

// Engine adapter driving external tool invocations. Tracks the process ids it
// launched and only ever terminates those.
class CommandEngine : public EngineAdapter {
public:
    CommandEngine(Workspace workspace, CommandEngineConfig config);
    ~CommandEngine() override;

    const Workspace& workspace() const override { return workspace_; }
    CompileReport compile_project(const CodeBundle& bundle, const std::string& task_key) override;
    RunReport run_simulation(const LayoutSpec& layout, const RunTarget& target) override;
    EngineAssetRef import_mesh(const std::filesystem::path& file) override;
    SessionHandle launch_user_session(const std::filesystem::path& source_dir,
                                      const std::filesystem::path& layout_file) override;
    bool isolates_processes() const override { return true; }

    // Terminates every user session this adapter started.
    void close_sessions();
    std::set<int> live_sessions() const;

private:
    Workspace workspace_;
    CommandEngineConfig config_;
    mutable std::mutex mu_;
    std::set<int> sessions_;
    int session_counter_ = 0;
};

std::string expand_placeholders(std::string command, const std::map<std::string, std::string>& values);

}  // namespace garden::engine
