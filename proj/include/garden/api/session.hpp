#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "garden/api/app_config.hpp"
#include "garden/engine/mock_engine.hpp"
#include "garden/llm/replay_provider.hpp"
#include "garden/orchestrator/runner.hpp"

namespace garden::api {

// One garden on disk with its collaborators wired from an AppConfig:
//   <dir>/garden.json, events.log, backups/, replay_cursor.json, plus the
//   engine workspace (source/, layouts/, assets/, screenshots/, sessions/).
// Scripted collaborators resume where earlier processes left off via the cursor.
class GardenSession {
public:
    // Throws ConflictingIds when `dir` already holds a garden.
    static std::unique_ptr<GardenSession> create(const std::filesystem::path& dir, const std::string& garden_id,
                                                 const AppConfig& config);
    // The event log is authoritative; garden.json is rewritten from it.
    static std::unique_ptr<GardenSession> open(const std::filesystem::path& dir, const AppConfig& config);
    static bool exists(const std::filesystem::path& dir);

    ~GardenSession();

    const std::filesystem::path& dir() const { return dir_; }
    Garden& garden() { return *garden_; }
    persistence::EventLog& log() { return *log_; }
    orchestrator::Orchestrator& orchestrator() { return *orchestrator_; }

    // Starts the worker; afterwards mutate only through runner().call().
    orchestrator::Runner& start_runner();
    orchestrator::Runner* runner() { return runner_.get(); }

    // Writes garden.json and the replay cursor.
    void save();

    llm::ReplayProvider* replay_provider() { return replay_; }
    engine::MockEngine* mock_engine() { return mock_; }

private:
    GardenSession(std::filesystem::path dir, const AppConfig& config);
    void wire(const AppConfig& config);

    std::filesystem::path dir_;
    std::unique_ptr<Garden> garden_;
    std::unique_ptr<persistence::EventLog> log_;
    std::unique_ptr<persistence::BackupStore> backups_;
    std::unique_ptr<llm::LlmProvider> provider_;
    llm::ReplayProvider* replay_ = nullptr;
    std::unique_ptr<engine::EngineAdapter> engine_;
    engine::MockEngine* mock_ = nullptr;
    std::unique_ptr<assets::Embedder> embedder_;
    std::unique_ptr<assets::AssetIndex> index_;
    std::unique_ptr<assets::AssetSource> source_;
    std::unique_ptr<assets::TextToImage> text_to_image_;
    std::unique_ptr<assets::ImageToMesh> image_to_mesh_;
    std::unique_ptr<orchestrator::Orchestrator> orchestrator_;
    std::unique_ptr<orchestrator::Runner> runner_;
};

}  // namespace garden::api
