#pragma once

#include <optional>
#include <string>
#include <vector>

#include "garden/assets/retrieval.hpp"
#include "garden/engine/adapter.hpp"
#include "garden/error.hpp"

namespace garden::assets {

struct GeneratedImage {
    std::string mime = "image/png";
    std::string bytes;
};

struct GeneratedMesh {
    std::string extension = ".glb";  // with dot
    std::string bytes;
};

class TextToImage {
public:
    virtual ~TextToImage() = default;
    virtual GeneratedImage generate(const std::string& prompt) = 0;
};

class ImageToMesh {
public:
    virtual ~ImageToMesh() = default;
    virtual GeneratedMesh convert(const GeneratedImage& image) = 0;
};

// AdapterError raised by the chain, naming the stage that failed.
class AdapterStageError : public Error {
public:
    AdapterStageError(std::string stage, const std::string& message)
        : Error(ErrorCode::AdapterError, stage + ": " + message), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

inline constexpr const char* kStageTextToImage = "text_to_image";
inline constexpr const char* kStageImageToMesh = "image_to_mesh";
inline constexpr const char* kStageImport = "import";

// Returns canned outputs and records every input.
class MockTextToImage : public TextToImage {
public:
    explicit MockTextToImage(GeneratedImage image) : image_(std::move(image)) {}
    GeneratedImage generate(const std::string& prompt) override;
    void fail_next(std::string message) { failure_ = std::move(message); }
    const std::vector<std::string>& prompts() const { return prompts_; }

private:
    GeneratedImage image_;
    std::optional<std::string> failure_;
    std::vector<std::string> prompts_;
};

class MockImageToMesh : public ImageToMesh {
public:
    explicit MockImageToMesh(GeneratedMesh mesh) : mesh_(std::move(mesh)) {}
    GeneratedMesh convert(const GeneratedImage& image) override;
    void fail_next(std::string message) { failure_ = std::move(message); }
    std::size_t calls() const { return calls_; }

private:
    GeneratedMesh mesh_;
    std::optional<std::string> failure_;
    std::size_t calls_ = 0;
};

struct MeshChainDeps {
    TextToImage& text_to_image;
    ImageToMesh& image_to_mesh;
    engine::EngineAdapter& engine;
    AssetRegistrar& registrar;
};

std::string augment_mesh_prompt(const std::string& prompt);

// text -> image -> mesh -> engine import -> registration (origin Generated,
// intermediate image as preview). Files go to assets/<asset_id>/.
// Throws AdapterStageError.
AssetRecord generate_mesh_chain(const std::string& prompt, const std::string& asset_id,
                                const std::string& display_name, MeshChainDeps deps,
                                std::optional<NodeId> origin_node = std::nullopt);

}  // namespace garden::assets
