#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "garden/core/garden.hpp"
#include "garden/error.hpp"

// JSON encoding of the domain types. Writers emit keys in a fixed order so
// that equal values always serialize to identical bytes.
namespace garden::persistence {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const GardenConfig& c);
// Missing keys take their defaults; the result is validated.
GardenConfig config_from_json(const Json& j);

Json to_json(const AssetRecord& r);
AssetRecord asset_from_json(const Json& j);

Json to_json(const Payload& p);
Payload payload_from_json(const Json& j);

Json to_json(const GardenNode& n);
GardenNode node_from_json(const Json& j);

Json to_json(const CodeBundle& b);
CodeBundle bundle_from_json(const Json& j);

Json to_json(const TaskSpec& t);
TaskSpec task_from_json(const Json& j);

// Whole-garden document: schema_version, id, config, mode, active, next_id,
// nodes (by id), assets (registration order).
Json to_json(const Garden& g);
Garden garden_from_json(const Json& j);

std::string save_garden(const Garden& g);
// Throws CorruptDocument or VersionMismatch.
Garden load_garden(std::string_view document);

// Wraps json exceptions as CorruptDocument with `what` as context.
template <typename F>
auto decode(std::string_view what, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::CorruptDocument, std::string(what) + ": " + e.what());
    }
}

}  // namespace garden::persistence
