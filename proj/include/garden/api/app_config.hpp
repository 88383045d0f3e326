#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "garden/core/types.hpp"
#include "garden/persistence/codec.hpp"

namespace garden::api {

// Service configuration file (JSON). Every section is optional:
//   {"garden":   {GardenConfig fields},
//    "provider": {"kind": "http"|"replay", "script_dir", "vision",
//                 "api_base", "api_key", "model", "vision_model", "max_retries"},
//    "engine":   {"kind": "mock"|"command", "scenario": <path or object>, "isolates_processes",
//                 "build_command", "run_command", "import_command", "session_command"},
//    "assets":   {"index", "embedder": "hashing"|"http", "dim", "source_base",
//                 "mesh_chain": {"image", "mesh"}}}
// Relative paths resolve against the file's directory. LLM_* and EMBED_API_*
// environment variables override the matching provider and embedder fields.
struct AppConfig {
    GardenConfig garden;
    persistence::Json provider = persistence::Json::object();
    persistence::Json engine = persistence::Json::object();
    persistence::Json assets = persistence::Json::object();

    static AppConfig from_json(const persistence::Json& doc, const std::filesystem::path& base_dir);
    static AppConfig load(const std::filesystem::path& file);
    // Paths already absolute, suitable for writing into a workspace.
    persistence::Json to_json() const;
};

}  // namespace garden::api
