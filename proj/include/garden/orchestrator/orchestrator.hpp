#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "garden/assets/asset_index.hpp"
#include "garden/assets/mesh_chain.hpp"
#include "garden/assets/retrieval.hpp"
#include "garden/codegen/pipeline.hpp"
#include "garden/orchestrator/edits.hpp"
#include "garden/orchestrator/journaled.hpp"
#include "garden/persistence/backup.hpp"
#include "garden/persistence/journal.hpp"
#include "garden/planner/planner.hpp"

namespace garden::orchestrator {

// External collaborators. provider and engine are required; the asset
// services are needed only by gardens with asset tasks.
struct Services {
    llm::LlmProvider* provider = nullptr;
    engine::EngineAdapter* engine = nullptr;
    assets::Embedder* embedder = nullptr;
    const assets::AssetIndex* index = nullptr;
    assets::AssetSource* source = nullptr;
    assets::TextToImage* text_to_image = nullptr;
    assets::ImageToMesh* image_to_mesh = nullptr;
};

struct StepOutcome {
    bool idle = false;
    std::optional<FrontierItem> item;
    std::string result;  // "ok" or a failure summary
};

struct InvalidationSet {
    std::vector<NodeId> removed;
    std::vector<NodeId> modified;
    std::vector<std::string> retracted;
    std::string reason;
    std::optional<std::string> backup_id;
};

// The control loop over one garden. Not thread-safe; Runner serializes access.
class Orchestrator {
public:
    Orchestrator(Garden& garden, persistence::EventLog& log, persistence::BackupStore& backups, Services services);

    Garden& garden() { return garden_; }
    const Garden& garden() const { return garden_; }
    persistence::Journal& journal() { return journal_; }
    persistence::EventLog& log() { return log_; }

    NodeId seed(std::string_view text);

    // One unit of work from the head of the frontier. Throws PreconditionViolation when Paused.
    StepOutcome step();
    // As step() without the mode check.
    StepOutcome work_unit();
    // Repeats work units until the frontier is empty; returns the number performed.
    std::size_t run_until_idle(std::size_t max_units = std::numeric_limits<std::size_t>::max());

    InvalidationSet apply_edit(const UserEdit& edit);
    void set_mode(Mode mode, persistence::Actor actor = persistence::Actor::User);
    // Materializes a compiled attempt under sessions/ and opens it in the engine.
    // Throws SnapshotMissing when the node has no compiled code and layout.
    engine::SessionHandle compile_and_run_at(NodeId node);
    void restore_backup(const std::string& backup_id);

    static std::string task_key(NodeId task);

private:
    std::string expand(NodeId node);
    std::string generate_task(NodeId leaf);
    std::string implement(NodeId task);
    std::string run_code_attempt(NodeId task, const TaskSpec& spec, bool procedural);
    std::string run_asset_task(NodeId task, const TaskSpec& spec, Executor executor);
    void set_status(NodeId id, NodeStatus status);

    Garden& garden_;
    persistence::EventLog& log_;
    persistence::BackupStore& backups_;
    persistence::Journal journal_;
    Services services_;
    JournaledProvider provider_;
    JournaledEngine engine_;
    JournalRegistrar registrar_;
    planner::Planner planner_;
    codegen::CodegenPipeline pipeline_;
};

}  // namespace garden::orchestrator
