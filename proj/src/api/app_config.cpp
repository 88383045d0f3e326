#include "garden/api/app_config.hpp"

#include "garden/error.hpp"
#include "garden/util/fs.hpp"

namespace garden::api {

namespace {

using persistence::Json;

void absolutize(Json& section, const char* key, const std::filesystem::path& base) {
    if (!section.is_object() || !section.contains(key) || !section[key].is_string()) return;
    std::filesystem::path p = section[key].get<std::string>();
    if (p.is_relative()) section[key] = (base / p).lexically_normal().string();
}

Json section(const Json& doc, const char* key) {
    if (!doc.contains(key)) return Json::object();
    if (!doc[key].is_object()) fail(ErrorCode::InvalidConfig, std::string("config section ") + key + " must be an object");
    return doc[key];
}

}  // namespace

AppConfig AppConfig::from_json(const Json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) fail(ErrorCode::InvalidConfig, "config must be a JSON object");
    AppConfig c;
    c.garden = persistence::config_from_json(section(doc, "garden"));
    c.provider = section(doc, "provider");
    c.engine = section(doc, "engine");
    c.assets = section(doc, "assets");
    absolutize(c.provider, "script_dir", base_dir);
    absolutize(c.engine, "scenario", base_dir);
    absolutize(c.assets, "index", base_dir);
    absolutize(c.assets, "source_base", base_dir);
    if (c.assets.contains("mesh_chain")) {
        absolutize(c.assets["mesh_chain"], "image", base_dir);
        absolutize(c.assets["mesh_chain"], "mesh", base_dir);
    }
    return c;
}

AppConfig AppConfig::load(const std::filesystem::path& file) {
    auto doc = Json::parse(fs::read_file(file), nullptr, false);
    if (doc.is_discarded()) fail(ErrorCode::InvalidConfig, "config is not valid JSON: " + file.string());
    return from_json(doc, std::filesystem::absolute(file).parent_path());
}

Json AppConfig::to_json() const {
    Json j;
    j["garden"] = persistence::to_json(garden);
    j["provider"] = provider;
    j["engine"] = engine;
    j["assets"] = assets;
    return j;
}

}  // namespace garden::api
