#include "garden/assets/mesh_chain.hpp"

#include "garden/prompts.hpp"
#include "garden/util/fs.hpp"

namespace garden::assets {

namespace {

std::string extension_for(const std::string& mime) {
    if (mime == "image/jpeg") return ".jpg";
    if (mime == "image/x-portable-pixmap") return ".ppm";
    return ".png";
}

}  // namespace

GeneratedImage MockTextToImage::generate(const std::string& prompt) {
    prompts_.push_back(prompt);
    if (failure_) {
        auto msg = *failure_;
        failure_.reset();
        fail(ErrorCode::AdapterError, msg);
    }
    return image_;
}

GeneratedMesh MockImageToMesh::convert(const GeneratedImage&) {
    ++calls_;
    if (failure_) {
        auto msg = *failure_;
        failure_.reset();
        fail(ErrorCode::AdapterError, msg);
    }
    return mesh_;
}

std::string augment_mesh_prompt(const std::string& prompt) {
    return prompt + "\n" + prompts::mesh_prompt_augmentation();
}

AssetRecord generate_mesh_chain(const std::string& prompt, const std::string& asset_id,
                                const std::string& display_name, MeshChainDeps deps,
                                std::optional<NodeId> origin_node) {
    const auto& ws = deps.engine.workspace();
    const auto dir = ws.assets_dir() / asset_id;
    auto stage = [](const char* name, auto&& fn) {
        try {
            return fn();
        } catch (const AdapterStageError&) {
            throw;
        } catch (const Error& e) {
            if (is_script_error(e.code())) throw;
            throw AdapterStageError(name, e.what());
        } catch (const std::exception& e) {
            throw AdapterStageError(name, e.what());
        }
    };

    auto image = stage(kStageTextToImage, [&] { return deps.text_to_image.generate(augment_mesh_prompt(prompt)); });
    if (image.bytes.empty()) throw AdapterStageError(kStageTextToImage, "adapter returned an empty image");
    auto mesh = stage(kStageImageToMesh, [&] { return deps.image_to_mesh.convert(image); });
    if (mesh.bytes.empty()) throw AdapterStageError(kStageImageToMesh, "adapter returned an empty mesh");

    const auto preview = dir / ("preview" + extension_for(image.mime));
    const auto mesh_file = dir / ("mesh" + mesh.extension);
    fs::write_file(preview, image.bytes);
    fs::write_file(mesh_file, mesh.bytes);
    stage(kStageImport, [&] { return deps.engine.import_mesh(mesh_file); });

    AssetRecord record;
    record.asset_id = asset_id;
    record.display_name = display_name;
    record.mesh_path = std::filesystem::relative(mesh_file, ws.root).generic_string();
    record.origin = AssetOrigin::Generated;
    record.preview_image = std::filesystem::relative(preview, ws.root).generic_string();
    record.origin_node = origin_node;
    deps.registrar.register_asset(record);
    return record;
}

}  // namespace garden::assets
