#pragma once

#include "garden/assets/retrieval.hpp"
#include "garden/engine/adapter.hpp"
#include "garden/llm/provider.hpp"
#include "garden/persistence/journal.hpp"

// Decorators that record every provider and engine call as an audit event and
// route asset registrations through the journal.
namespace garden::orchestrator {

class JournaledProvider : public llm::LlmProvider {
public:
    JournaledProvider(llm::LlmProvider& inner, persistence::EventLog& log) : inner_(inner), log_(log) {}
    bool supports_vision() const override { return inner_.supports_vision(); }

protected:
    llm::CompletionResponse do_complete(const llm::CompletionRequest& request) override;

private:
    llm::LlmProvider& inner_;
    persistence::EventLog& log_;
};

class JournaledEngine : public engine::EngineAdapter {
public:
    JournaledEngine(engine::EngineAdapter& inner, persistence::EventLog& log) : inner_(inner), log_(log) {}

    const engine::Workspace& workspace() const override { return inner_.workspace(); }
    engine::CompileReport compile_project(const CodeBundle& bundle, const std::string& task_key) override;
    engine::RunReport run_simulation(const LayoutSpec& layout, const engine::RunTarget& target) override;
    engine::EngineAssetRef import_mesh(const std::filesystem::path& file) override;
    engine::SessionHandle launch_user_session(const std::filesystem::path& source_dir,
                                              const std::filesystem::path& layout_file) override;
    bool isolates_processes() const override { return inner_.isolates_processes(); }

private:
    template <typename F>
    auto record(const char* op, std::string target, F&& call);

    engine::EngineAdapter& inner_;
    persistence::EventLog& log_;
};

class JournalRegistrar : public assets::AssetRegistrar {
public:
    JournalRegistrar(persistence::Journal& journal, std::filesystem::path workspace_root)
        : journal_(journal), root_(std::move(workspace_root)) {}
    const AssetRegistry& registry() const override { return journal_.garden().assets(); }
    // Checks the mesh file like assets::register_asset, then journals.
    void register_asset(const AssetRecord& record) override;

private:
    persistence::Journal& journal_;
    std::filesystem::path root_;
};

}  // namespace garden::orchestrator
