#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "garden/assets/embedding.hpp"

namespace garden::assets {

struct IndexEntry {
    std::string asset_id;
    Embedding embedding;
    std::string source_uri;
    std::string display_name;

    friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

struct IndexMatch {
    const IndexEntry* entry = nullptr;
    double distance = 0;
};

// Linear-scan cosine index. File format:
// {"version": 1, "dim": N, "entries": [{"asset_id", "source_uri", "display_name", "embedding": [...]}]}
class AssetIndex {
public:
    static constexpr int kVersion = 1;

    explicit AssetIndex(std::size_t dim = 0) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    const std::vector<IndexEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    // Throws DuplicateAssetId, or InvalidTarget for a wrong dimension or non-finite value.
    void add(IndexEntry entry);

    // Exact argmin of cosine distance; ties go to the smallest asset_id. Throws EmptyIndex.
    IndexMatch nearest(const Embedding& query) const;

    nlohmann::ordered_json to_json() const;
    static AssetIndex from_json(const nlohmann::json& doc);
    void save(const std::filesystem::path& file) const;
    static AssetIndex load(const std::filesystem::path& file);

    friend bool operator==(const AssetIndex&, const AssetIndex&) = default;

private:
    std::size_t dim_;
    std::vector<IndexEntry> entries_;
};

// One record per line: JSON {"asset_id", "thumbnail", "source_uri", "name"?}.
// Blank lines and lines starting with '#' are skipped.
struct ManifestRecord {
    std::string asset_id;
    std::filesystem::path thumbnail;  // resolved against the manifest's directory
    std::string source_uri;
    std::string display_name;
};

std::vector<ManifestRecord> parse_manifest(std::string_view text, const std::filesystem::path& base_dir);

// Embeds every thumbnail of the manifest into a fresh index. Relative source
// paths are rewritten relative to `index_dir` (default: the manifest's directory).
AssetIndex build_index(const std::filesystem::path& manifest_file, Embedder& embedder,
                       const std::optional<std::filesystem::path>& index_dir = std::nullopt);

}  // namespace garden::assets
