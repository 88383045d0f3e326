#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "garden/core/garden.hpp"
#include "garden/persistence/event_log.hpp"

namespace garden::persistence {

// Event types. State-changing ones are applied on replay; the rest are audit
// records that replay skips.
namespace events {
inline constexpr const char* kGardenCreated = "GardenCreated";    // {garden_id, config}
inline constexpr const char* kNodeAdded = "NodeAdded";            // {node}
inline constexpr const char* kNodeUpdated = "NodeUpdated";        // {node}
inline constexpr const char* kNodeDeleted = "NodeDeleted";        // {id}
inline constexpr const char* kModeChanged = "ModeChanged";        // {mode}
inline constexpr const char* kAssetRegistered = "AssetRegistered";  // {asset, position}
inline constexpr const char* kAssetRetracted = "AssetRetracted";    // {asset_id}
inline constexpr const char* kWorkStarted = "WorkStarted";        // {kind, target}
inline constexpr const char* kWorkFinished = "WorkFinished";      // {kind, target, outcome}
inline constexpr const char* kBackupCreated = "BackupCreated";    // {backup_id, edit, removed, modified, assets}
inline constexpr const char* kBackupRestored = "BackupRestored";  // {backup_id}
inline constexpr const char* kEditApplied = "EditApplied";        // {edit, backup_id?, removed}
inline constexpr const char* kProviderCall = "ProviderCall";      // {role, ok, prompt_hash, error?}
inline constexpr const char* kEngineCall = "EngineCall";          // {op, target, ok, error?}
}  // namespace events

// Applies one state-changing event; audit events are ignored.
void apply_event(Garden& garden, const GardenEvent& event);

// Rebuilds a garden from a log that starts with GardenCreated. With `upto`,
// stops after the event with that seq. Throws SequenceGap or CorruptDocument.
Garden replay_events(const std::vector<GardenEvent>& log, std::optional<std::uint64_t> upto = std::nullopt);

// Mutates a garden through its validated operations and records each change
// with a full node snapshot, so replay needs no domain logic.
class Journal {
public:
    Journal(Garden& garden, EventLog& log) : garden_(garden), log_(log) {}

    Garden& garden() { return garden_; }
    const Garden& garden() const { return garden_; }
    EventLog& log() { return log_; }

    void record_created();
    NodeId add_seed(std::string_view text, Actor actor);
    NodeId add_child(NodeId parent, NodeKind kind, std::string_view text, bool is_leaf,
                     std::optional<std::string> submodule, Payload payload, Actor actor = Actor::System);
    void update(const GardenNode& node, Actor actor = Actor::System);
    void erase(NodeId id, Actor actor = Actor::System);
    void insert(const GardenNode& node, Actor actor = Actor::System);
    void set_mode(Mode mode, Actor actor);
    void register_asset(const AssetRecord& record, Actor actor = Actor::System);
    void register_asset_at(std::size_t position, const AssetRecord& record, Actor actor);
    AssetRecord retract_asset(const std::string& asset_id, Actor actor = Actor::System);
    void work_started(const FrontierItem& item);
    void work_finished(const FrontierItem& item, std::string_view outcome);
    GardenEvent audit(const char* type, Json data, Actor actor = Actor::System);

private:
    Garden& garden_;
    EventLog& log_;
};

}  // namespace garden::persistence
