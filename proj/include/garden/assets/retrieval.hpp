#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "garden/assets/asset_index.hpp"
#include "garden/assets/embedding.hpp"
#include "garden/core/asset_registry.hpp"
#include "garden/engine/adapter.hpp"

namespace garden::assets {

// Downloads or copies the asset behind a source URI into `dest_dir`.
class AssetSource {
public:
    virtual ~AssetSource() = default;
    // Returns the local file. Throws FetchError.
    virtual std::filesystem::path fetch(const std::string& uri, const std::filesystem::path& dest_dir) = 0;
};

// file:// URIs and plain paths (relative ones against `base_dir`), plus http(s) GET.
class DefaultAssetSource : public AssetSource {
public:
    explicit DefaultAssetSource(std::filesystem::path base_dir = {}) : base_dir_(std::move(base_dir)) {}
    std::filesystem::path fetch(const std::string& uri, const std::filesystem::path& dest_dir) override;

private:
    std::filesystem::path base_dir_;
};

// Receives registrations so the owner can journal them.
class AssetRegistrar {
public:
    virtual ~AssetRegistrar() = default;
    virtual const AssetRegistry& registry() const = 0;
    virtual void register_asset(const AssetRecord& record) = 0;
};

// Plain registrar over a registry; checks the mesh file exists under `workspace_root`.
class RegistryRegistrar : public AssetRegistrar {
public:
    RegistryRegistrar(AssetRegistry& registry, std::filesystem::path workspace_root)
        : registry_(registry), root_(std::move(workspace_root)) {}
    const AssetRegistry& registry() const override { return registry_; }
    void register_asset(const AssetRecord& record) override;

private:
    AssetRegistry& registry_;
    std::filesystem::path root_;
};

// Throws MissingFile when the mesh is absent, DuplicateAssetId when already registered.
void register_asset(AssetRegistry& registry, const AssetRecord& record, const std::filesystem::path& workspace_root);

struct RetrievalDeps {
    Embedder& embedder;
    AssetSource& source;
    engine::EngineAdapter& engine;
    AssetRegistrar& registrar;
};

// Embeds the description, picks the nearest entry, fetches it into
// assets/<asset_id>/, imports it and registers it as Downloaded. An asset
// that is already registered is returned as is.
AssetRecord retrieve_nearest_asset(const std::string& description, const AssetIndex& index, RetrievalDeps deps,
                                   std::optional<NodeId> origin_node = std::nullopt);

}  // namespace garden::assets
