#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garden/core/types.hpp"

namespace garden::engine {

inline constexpr int kScreenshotCount = 6;
inline constexpr int kScreenshotIntervalSeconds = 1;

// Marker lines the init placement script prints around its own log section.
inline constexpr std::string_view kInitBegin = "[garden-init] BEGIN";
inline constexpr std::string_view kInitEnd = "[garden-init] END";

// Per-garden directory tree shared by the pipeline and the adapters:
//   <root>/source/<task>/, layouts/, assets/, screenshots/<task>/<attempt>/, sessions/
struct Workspace {
    std::filesystem::path root;

    std::filesystem::path source_dir() const { return root / "source"; }
    std::filesystem::path task_source_dir(std::string_view task_key) const { return source_dir() / task_key; }
    std::filesystem::path layouts_dir() const { return root / "layouts"; }
    std::filesystem::path assets_dir() const { return root / "assets"; }
    std::filesystem::path screenshots_dir(std::string_view task_key, int attempt) const {
        return root / "screenshots" / task_key / std::to_string(attempt);
    }
    std::filesystem::path sessions_dir() const { return root / "sessions"; }
};

struct CompileReport {
    bool success = false;
    std::string log;
};

enum class RunOutcome { Ran, PlacementError, Crashed };
std::string_view to_string(RunOutcome o);

struct RunReport {
    RunOutcome outcome = RunOutcome::Ran;
    std::string runtime_log;
    std::optional<std::string> crash_log;
    std::optional<std::string> placement_log_excerpt;
    std::vector<std::string> screenshots;  // file paths, capture order

    // Throws PreconditionViolation when outcome-specific fields are missing.
    void validate() const;
};

struct RunTarget {
    std::string task_key;
    int attempt = 1;
};

struct EngineAssetRef {
    std::string reference;
};

struct SessionHandle {
    std::string session_id;
    std::filesystem::path source_dir;
    std::filesystem::path layout_file;
    int pid = 0;
};

// Everything the host engine does for the pipeline.
class EngineAdapter {
public:
    virtual ~EngineAdapter() = default;

    virtual const Workspace& workspace() const = 0;
    // Sources are already materialized under workspace().task_source_dir(task_key).
    virtual CompileReport compile_project(const CodeBundle& bundle, const std::string& task_key) = 0;
    virtual RunReport run_simulation(const LayoutSpec& layout, const RunTarget& target) = 0;
    virtual EngineAssetRef import_mesh(const std::filesystem::path& file) = 0;
    // Launches an editor session for the user on a materialized snapshot.
    virtual SessionHandle launch_user_session(const std::filesystem::path& source_dir,
                                              const std::filesystem::path& layout_file) = 0;
    // False when a user session cannot run beside backend runs.
    virtual bool isolates_processes() const = 0;
};

// Lines from kInitBegin through the matching kInitEnd line, if present.
std::optional<std::string> extract_init_section(std::string_view log);
// True when the init section's END line reports `status=error`.
bool init_section_failed(std::string_view log);

bool is_mesh_file(const std::filesystem::path& file);

// Actor classes declared in a bundle's sources (`class [X_API] AName : public A...`),
// in file order, without duplicates.
std::vector<std::string> declared_actor_classes(const CodeBundle& bundle);

}  // namespace garden::engine
