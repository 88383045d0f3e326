#include "garden/assets/retrieval.hpp"

#include <httplib.h>

#include "garden/error.hpp"
#include "garden/util/fs.hpp"
#include "garden/util/url.hpp"

namespace garden::assets {

namespace {

std::string file_name_of(const std::string& uri) {
    auto path = uri.substr(0, uri.find_first_of("?#"));
    auto slash = path.find_last_of('/');
    auto name = slash == std::string::npos ? path : path.substr(slash + 1);
    return name.empty() ? "asset.bin" : name;
}

}  // namespace

std::filesystem::path DefaultAssetSource::fetch(const std::string& uri, const std::filesystem::path& dest_dir) {
    std::error_code ec;
    std::filesystem::create_directories(dest_dir, ec);
    if (uri.rfind("http://", 0) == 0 || uri.rfind("https://", 0) == 0) {
        auto scheme_end = uri.find("://") + 3;
        auto path_start = uri.find('/', scheme_end);
        std::string origin = path_start == std::string::npos ? uri : uri.substr(0, path_start);
        std::string path = path_start == std::string::npos ? "/" : uri.substr(path_start);
        httplib::Client client(origin);
        client.set_follow_location(true);
        client.set_read_timeout(std::chrono::seconds(120));
        auto res = client.Get(path);
        if (!res) fail(ErrorCode::FetchError, uri + ": " + httplib::to_string(res.error()));
        if (res->status != 200) fail(ErrorCode::FetchError, uri + ": HTTP " + std::to_string(res->status));
        auto dest = dest_dir / file_name_of(path);
        fs::write_file(dest, res->body);
        return dest;
    }
    std::filesystem::path src = uri.rfind("file://", 0) == 0 ? std::filesystem::path(uri.substr(7))
                                                              : std::filesystem::path(uri);
    if (src.is_relative() && !base_dir_.empty()) src = base_dir_ / src;
    if (!std::filesystem::is_regular_file(src)) fail(ErrorCode::FetchError, "no such file: " + src.string());
    auto dest = dest_dir / src.filename();
    std::filesystem::copy_file(src, dest, std::filesystem::copy_options::overwrite_existing, ec);
    if (ec) fail(ErrorCode::FetchError, "copy " + src.string() + ": " + ec.message());
    return dest;
}

void register_asset(AssetRegistry& registry, const AssetRecord& record, const std::filesystem::path& workspace_root) {
    if (!std::filesystem::is_regular_file(workspace_root / record.mesh_path)) {
        fail(ErrorCode::MissingFile, "mesh " + record.mesh_path + " not found in workspace");
    }
    registry.add(record);
}

void RegistryRegistrar::register_asset(const AssetRecord& record) { assets::register_asset(registry_, record, root_); }

AssetRecord retrieve_nearest_asset(const std::string& description, const AssetIndex& index, RetrievalDeps deps,
                                   std::optional<NodeId> origin_node) {
    if (index.empty()) fail(ErrorCode::EmptyIndex, "asset index has no entries");
    auto query = deps.embedder.embed_text(description);
    auto match = index.nearest(query);
    const auto& entry = *match.entry;
    if (const auto* existing = deps.registrar.registry().find(entry.asset_id)) return *existing;

    const auto& root = deps.engine.workspace().root;
    auto local = deps.source.fetch(entry.source_uri, deps.engine.workspace().assets_dir() / entry.asset_id);
    deps.engine.import_mesh(local);

    AssetRecord record;
    record.asset_id = entry.asset_id;
    record.display_name = entry.display_name.empty() ? entry.asset_id : entry.display_name;
    record.mesh_path = std::filesystem::relative(local, root).generic_string();
    record.origin = AssetOrigin::Downloaded;
    record.origin_node = origin_node;
    deps.registrar.register_asset(record);
    return record;
}

}  // namespace garden::assets
