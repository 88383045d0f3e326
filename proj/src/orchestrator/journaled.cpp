#include "garden/orchestrator/journaled.hpp"

#include "garden/error.hpp"

namespace garden::orchestrator {

using persistence::Actor;
using persistence::Json;
namespace events = persistence::events;

llm::CompletionResponse JournaledProvider::do_complete(const llm::CompletionRequest& request) {
    Json data;
    data["role"] = request.role_tag;
    data["prompt_hash"] = request.prompt_hash();
    data["images"] = request.images.size();
    data["request"] = request.transcript();
    try {
        auto response = inner_.complete(request);
        data["ok"] = true;
        data["response"] = response.text;
        data["truncated"] = response.truncated;
        log_.append(Actor::System, events::kProviderCall, std::move(data));
        return response;
    } catch (const Error& e) {
        data["ok"] = false;
        data["error"] = e.what();
        data["code"] = to_string(e.code());
        log_.append(Actor::System, events::kProviderCall, std::move(data));
        throw;
    }
}

template <typename F>
auto JournaledEngine::record(const char* op, std::string target, F&& call) {
    Json data{{"op", op}, {"target", std::move(target)}};
    try {
        auto result = call();
        data["ok"] = true;
        return std::pair{std::move(result), std::move(data)};
    } catch (const Error& e) {
        data["ok"] = false;
        data["error"] = e.what();
        data["code"] = to_string(e.code());
        log_.append(Actor::System, events::kEngineCall, std::move(data));
        throw;
    }
}

engine::CompileReport JournaledEngine::compile_project(const CodeBundle& bundle, const std::string& task_key) {
    auto [report, data] = record("compile", task_key, [&] { return inner_.compile_project(bundle, task_key); });
    data["success"] = report.success;
    log_.append(Actor::System, events::kEngineCall, std::move(data));
    return report;
}

engine::RunReport JournaledEngine::run_simulation(const LayoutSpec& layout, const engine::RunTarget& target) {
    auto [report, data] = record("run", target.task_key + "#" + std::to_string(target.attempt),
                                 [&] { return inner_.run_simulation(layout, target); });
    data["outcome"] = engine::to_string(report.outcome);
    data["screenshots"] = report.screenshots.size();
    log_.append(Actor::System, events::kEngineCall, std::move(data));
    return report;
}

engine::EngineAssetRef JournaledEngine::import_mesh(const std::filesystem::path& file) {
    auto [ref, data] = record("import", file.filename().string(), [&] { return inner_.import_mesh(file); });
    data["reference"] = ref.reference;
    log_.append(Actor::System, events::kEngineCall, std::move(data));
    return ref;
}

engine::SessionHandle JournaledEngine::launch_user_session(const std::filesystem::path& source_dir,
                                                           const std::filesystem::path& layout_file) {
    auto [handle, data] = record("session", source_dir.filename().string(),
                                 [&] { return inner_.launch_user_session(source_dir, layout_file); });
    data["session_id"] = handle.session_id;
    data["layout_file"] = layout_file.string();
    log_.append(Actor::User, events::kEngineCall, std::move(data));
    return handle;
}

void JournalRegistrar::register_asset(const AssetRecord& record) {
    if (!std::filesystem::is_regular_file(root_ / record.mesh_path)) {
        fail(ErrorCode::MissingFile, "mesh " + record.mesh_path + " not found in workspace");
    }
    if (journal_.garden().assets().find(record.asset_id)) fail(ErrorCode::DuplicateAssetId, record.asset_id);
    journal_.register_asset(record);
}

}  // namespace garden::orchestrator
