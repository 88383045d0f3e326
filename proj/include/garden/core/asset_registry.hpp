#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garden/core/types.hpp"

namespace garden {

// Assets the project currently exposes to code generation, in registration order.
class AssetRegistry {
public:
    void add(AssetRecord record);
    // Inserts at `position` (clamped to the end); used to undo a removal in place.
    void insert_at(std::size_t position, AssetRecord record);
    std::optional<std::size_t> position(std::string_view asset_id) const;
    // Returns the removed record; throws UnknownNode-style InvalidTarget when absent.
    AssetRecord remove(std::string_view asset_id);
    const AssetRecord* find(std::string_view asset_id) const;
    const std::vector<AssetRecord>& records() const { return records_; }
    std::vector<AssetRecord> created_by(NodeId node) const;
    bool empty() const { return records_.empty(); }

    friend bool operator==(const AssetRegistry&, const AssetRegistry&) = default;

private:
    std::vector<AssetRecord> records_;
};

}  // namespace garden
