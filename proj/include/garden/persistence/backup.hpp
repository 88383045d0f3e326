#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "garden/core/garden.hpp"
#include "garden/persistence/codec.hpp"

namespace garden::persistence {

// Pre-edit state needed to undo one cascade. Self-contained.
struct BackupBundle {
    std::string backup_id;
    Json edit = Json::object();         // the edit that caused the cascade
    std::vector<GardenNode> removed;    // pre-order, parents before children
    std::vector<GardenNode> modified;   // nodes the edit changed in place
    std::vector<AssetRecord> assets;    // retracted registry entries
    std::vector<std::size_t> asset_positions;  // pre-edit registry index of each, ascending

    Json to_json() const;
    static BackupBundle from_json(const Json& j);

    friend bool operator==(const BackupBundle&, const BackupBundle&) = default;
};

// Backups by id; with a directory, each lives in <dir>/<backup_id>/backup.json.
class BackupStore {
public:
    BackupStore() = default;
    // Loads existing backups from `dir`.
    explicit BackupStore(std::filesystem::path dir);

    // Assigns the next id ("bk-0001", ...), persists and returns it.
    const BackupBundle& create(BackupBundle bundle);
    // Throws UnknownBackup.
    const BackupBundle& get(const std::string& backup_id) const;
    std::vector<std::string> ids() const;

private:
    std::optional<std::filesystem::path> dir_;
    std::map<std::string, BackupBundle> backups_;
};

// Reinstates a bundle: modified nodes are overwritten, removed nodes reinserted
// with their ids and ordinals, assets re-registered at their old positions. Throws ConflictingIds when
// any removed node or asset is already present; the garden is then untouched.
void restore_backup(Garden& garden, const BackupBundle& bundle);

}  // namespace garden::persistence
