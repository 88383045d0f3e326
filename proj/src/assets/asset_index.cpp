#include "garden/assets/asset_index.hpp"

#include <cmath>

#include "garden/codegen/evaluators.hpp"
#include "garden/error.hpp"
#include "garden/util/fs.hpp"
#include "garden/util/text.hpp"

namespace garden::assets {

void AssetIndex::add(IndexEntry entry) {
    if (dim_ == 0) dim_ = entry.embedding.size();
    if (entry.embedding.size() != dim_ || dim_ == 0) {
        fail(ErrorCode::InvalidTarget, "entry " + entry.asset_id + " has dim " +
                                           std::to_string(entry.embedding.size()) + ", index dim " +
                                           std::to_string(dim_));
    }
    for (double v : entry.embedding) {
        if (!std::isfinite(v)) fail(ErrorCode::InvalidTarget, "entry " + entry.asset_id + " has a non-finite value");
    }
    for (const auto& e : entries_) {
        if (e.asset_id == entry.asset_id) fail(ErrorCode::DuplicateAssetId, entry.asset_id);
    }
    entries_.push_back(std::move(entry));
}

IndexMatch AssetIndex::nearest(const Embedding& query) const {
    if (entries_.empty()) fail(ErrorCode::EmptyIndex, "asset index has no entries");
    IndexMatch best;
    for (const auto& e : entries_) {
        double d = cosine_distance(query, e.embedding);
        if (!best.entry || d < best.distance || (d == best.distance && e.asset_id < best.entry->asset_id)) {
            best = {&e, d};
        }
    }
    return best;
}

nlohmann::ordered_json AssetIndex::to_json() const {
    nlohmann::ordered_json doc;
    doc["version"] = kVersion;
    doc["dim"] = dim_;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : entries_) {
        nlohmann::ordered_json j;
        j["asset_id"] = e.asset_id;
        j["source_uri"] = e.source_uri;
        j["display_name"] = e.display_name;
        j["embedding"] = e.embedding;
        arr.push_back(std::move(j));
    }
    doc["entries"] = std::move(arr);
    return doc;
}

AssetIndex AssetIndex::from_json(const nlohmann::json& doc) {
    try {
        if (doc.at("version").get<int>() != kVersion) {
            fail(ErrorCode::VersionMismatch, "asset index version " + doc.at("version").dump());
        }
        AssetIndex index(doc.at("dim").get<std::size_t>());
        for (const auto& j : doc.at("entries")) {
            index.add({j.at("asset_id").get<std::string>(), j.at("embedding").get<Embedding>(),
                       j.value("source_uri", std::string()), j.value("display_name", std::string())});
        }
        return index;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::CorruptDocument, std::string("asset index: ") + e.what());
    }
}

void AssetIndex::save(const std::filesystem::path& file) const { fs::write_file(file, to_json().dump(1) + "\n"); }

AssetIndex AssetIndex::load(const std::filesystem::path& file) {
    auto text = fs::read_file(file);
    auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail(ErrorCode::CorruptDocument, "asset index is not JSON: " + file.string());
    return from_json(doc);
}

std::vector<ManifestRecord> parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
    std::vector<ManifestRecord> out;
    int line_no = 0;
    for (const auto& raw : text::split_lines(text)) {
        ++line_no;
        auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("asset_id") || !j.contains("thumbnail")) {
            fail(ErrorCode::CorruptDocument, "manifest line " + std::to_string(line_no) + " is not a record");
        }
        ManifestRecord r;
        r.asset_id = j["asset_id"].get<std::string>();
        std::filesystem::path thumb = j["thumbnail"].get<std::string>();
        r.thumbnail = thumb.is_absolute() ? thumb : base_dir / thumb;
        r.source_uri = j.value("source_uri", std::string());
        r.display_name = j.value("name", r.asset_id);
        out.push_back(std::move(r));
    }
    return out;
}

AssetIndex build_index(const std::filesystem::path& manifest_file, Embedder& embedder,
                       const std::optional<std::filesystem::path>& index_dir) {
    const auto manifest_dir = std::filesystem::absolute(manifest_file).parent_path();
    const auto target_dir = index_dir ? std::filesystem::absolute(*index_dir) : manifest_dir;
    auto records = parse_manifest(fs::read_file(manifest_file), manifest_file.parent_path());
    AssetIndex index(embedder.dim());
    for (auto& r : records) {
        auto bytes = fs::read_file(r.thumbnail);
        auto embedding = embedder.embed_image(bytes, codegen::image_mime_for(r.thumbnail.string()));
        auto source = r.source_uri;
        if (!source.empty() && source.find("://") == std::string::npos && std::filesystem::path(source).is_relative()) {
            source = (manifest_dir / source).lexically_normal().lexically_relative(target_dir).string();
        }
        index.add({r.asset_id, std::move(embedding), std::move(source), r.display_name});
    }
    return index;
}

}  // namespace garden::assets
