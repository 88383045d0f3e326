#include "garden/core/asset_registry.hpp"

#include <algorithm>

#include "garden/error.hpp"

namespace garden {

void AssetRegistry::add(AssetRecord record) {
    if (record.asset_id.empty()) fail(ErrorCode::InvalidTarget, "asset id is empty");
    if (find(record.asset_id)) fail(ErrorCode::DuplicateAssetId, record.asset_id);
    records_.push_back(std::move(record));
}

void AssetRegistry::insert_at(std::size_t position, AssetRecord record) {
    if (record.asset_id.empty()) fail(ErrorCode::InvalidTarget, "asset id is empty");
    if (find(record.asset_id)) fail(ErrorCode::DuplicateAssetId, record.asset_id);
    position = std::min(position, records_.size());
    records_.insert(records_.begin() + static_cast<std::ptrdiff_t>(position), std::move(record));
}

std::optional<std::size_t> AssetRegistry::position(std::string_view asset_id) const {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (records_[i].asset_id == asset_id) return i;
    }
    return std::nullopt;
}

AssetRecord AssetRegistry::remove(std::string_view asset_id) {
    auto it = std::find_if(records_.begin(), records_.end(),
                           [&](const AssetRecord& r) { return r.asset_id == asset_id; });
    if (it == records_.end()) fail(ErrorCode::InvalidTarget, "unknown asset " + std::string(asset_id));
    AssetRecord out = std::move(*it);
    records_.erase(it);
    return out;
}

const AssetRecord* AssetRegistry::find(std::string_view asset_id) const {
    for (const auto& r : records_) {
        if (r.asset_id == asset_id) return &r;
    }
    return nullptr;
}

std::vector<AssetRecord> AssetRegistry::created_by(NodeId node) const {
    std::vector<AssetRecord> out;
    for (const auto& r : records_) {
        if (r.origin_node == node) out.push_back(r);
    }
    return out;
}

}  // namespace garden
