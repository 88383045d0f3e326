#include "garden/persistence/backup.hpp"

#include <cstdio>

#include "garden/error.hpp"
#include "garden/util/fs.hpp"

namespace garden::persistence {

Json BackupBundle::to_json() const {
    Json j;
    j["backup_id"] = backup_id;
    j["edit"] = edit;
    auto nodes = [](const std::vector<GardenNode>& v) {
        auto arr = Json::array();
        for (const auto& n : v) arr.push_back(persistence::to_json(n));
        return arr;
    };
    j["removed"] = nodes(removed);
    j["modified"] = nodes(modified);
    auto arr = Json::array();
    for (const auto& a : assets) arr.push_back(persistence::to_json(a));
    j["assets"] = std::move(arr);
    j["asset_positions"] = asset_positions;
    return j;
}

BackupBundle BackupBundle::from_json(const Json& j) {
    return decode("backup", [&] {
        BackupBundle b;
        b.backup_id = j.at("backup_id").get<std::string>();
        b.edit = j.at("edit");
        for (const auto& n : j.at("removed")) b.removed.push_back(node_from_json(n));
        for (const auto& n : j.at("modified")) b.modified.push_back(node_from_json(n));
        for (const auto& a : j.at("assets")) b.assets.push_back(asset_from_json(a));
        b.asset_positions = j.at("asset_positions").get<std::vector<std::size_t>>();
        if (b.asset_positions.size() != b.assets.size()) fail(ErrorCode::CorruptDocument, "asset positions");
        return b;
    });
}

BackupStore::BackupStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    if (!std::filesystem::is_directory(*dir_, ec)) return;
    for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
        auto file = entry.path() / "backup.json";
        if (!std::filesystem::exists(file)) continue;
        auto j = Json::parse(fs::read_file(file), nullptr, false);
        if (j.is_discarded()) fail(ErrorCode::CorruptDocument, "backup " + file.string());
        auto b = BackupBundle::from_json(j);
        backups_.emplace(b.backup_id, std::move(b));
    }
}

const BackupBundle& BackupStore::create(BackupBundle bundle) {
    char id[32];
    std::snprintf(id, sizeof id, "bk-%04zu", backups_.size() + 1);
    bundle.backup_id = id;
    if (dir_) fs::write_file(*dir_ / bundle.backup_id / "backup.json", bundle.to_json().dump(2) + "\n");
    return backups_.emplace(bundle.backup_id, std::move(bundle)).first->second;
}

const BackupBundle& BackupStore::get(const std::string& backup_id) const {
    auto it = backups_.find(backup_id);
    if (it == backups_.end()) fail(ErrorCode::UnknownBackup, backup_id);
    return it->second;
}

std::vector<std::string> BackupStore::ids() const {
    std::vector<std::string> out;
    for (const auto& [id, b] : backups_) out.push_back(id);
    return out;
}

void restore_backup(Garden& garden, const BackupBundle& bundle) {
    for (const auto& n : bundle.removed) {
        if (garden.contains(n.id)) fail(ErrorCode::ConflictingIds, "node " + to_string(n.id) + " is present");
    }
    for (const auto& a : bundle.assets) {
        if (garden.assets().find(a.asset_id)) fail(ErrorCode::ConflictingIds, "asset " + a.asset_id + " is present");
    }
    Garden scratch = garden;
    for (const auto& n : bundle.modified) scratch.update_node(n);
    for (const auto& n : bundle.removed) scratch.insert_node(n);
    for (std::size_t i = 0; i < bundle.assets.size(); ++i) {
        scratch.assets().insert_at(bundle.asset_positions.at(i), bundle.assets[i]);
    }
    garden = std::move(scratch);
}

}  // namespace garden::persistence
