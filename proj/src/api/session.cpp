#include "garden/api/session.hpp"

#include <cstdlib>

#include "garden/engine/command_engine.hpp"
#include "garden/error.hpp"
#include "garden/llm/http_provider.hpp"
#include "garden/util/fs.hpp"

namespace garden::api {

namespace {

using persistence::Json;

constexpr const char* kGardenFile = "garden.json";
constexpr const char* kEventsFile = "events.log";
constexpr const char* kCursorFile = "replay_cursor.json";

std::string str(const Json& j, const char* key, std::string fallback = {}) {
    return j.contains(key) && j[key].is_string() ? j[key].get<std::string>() : fallback;
}

void env_override(std::string& field, const char* name) {
    const char* v = std::getenv(name);
    if (v && *v) field = v;
}

std::unique_ptr<llm::LlmProvider> make_provider(const Json& cfg, llm::ReplayProvider*& replay) {
    const auto kind = str(cfg, "kind", "http");
    if (kind == "replay") {
        const auto dir = str(cfg, "script_dir");
        if (dir.empty()) fail(ErrorCode::InvalidConfig, "replay provider needs script_dir");
        auto p = std::make_unique<llm::ReplayProvider>(llm::ReplayProvider::from_directory(dir));
        p->set_vision(cfg.value("vision", true));
        replay = p.get();
        return p;
    }
    if (kind != "http") fail(ErrorCode::InvalidConfig, "unknown provider kind " + kind);
    llm::HttpProviderConfig c;
    c.api_base = str(cfg, "api_base");
    c.api_key = str(cfg, "api_key");
    c.model = str(cfg, "model", c.model);
    c.vision_model = str(cfg, "vision_model");
    c.max_retries = cfg.value("max_retries", c.max_retries);
    c.vision = cfg.value("vision", true);
    env_override(c.api_base, "LLM_API_BASE");
    env_override(c.api_key, "LLM_API_KEY");
    env_override(c.model, "LLM_MODEL");
    env_override(c.vision_model, "LLM_VISION_MODEL");
    return std::make_unique<llm::HttpProvider>(c);
}

std::unique_ptr<engine::EngineAdapter> make_engine(const Json& cfg, const engine::Workspace& ws,
                                                   engine::MockEngine*& mock) {
    const auto kind = str(cfg, "kind", "mock");
    if (kind == "mock") {
        engine::MockScenario scenario;
        if (cfg.contains("scenario")) {
            Json doc = cfg["scenario"];
            if (doc.is_string()) {
                doc = Json::parse(fs::read_file(doc.get<std::string>()), nullptr, false);
                if (doc.is_discarded()) fail(ErrorCode::InvalidConfig, "mock scenario is not valid JSON");
            }
            scenario = engine::MockScenario::from_json(nlohmann::json(doc));
        } else {
            scenario.compile_default = engine::MockCompile{};
            scenario.run_default = engine::MockRun{};
            scenario.import_default = engine::MockImport{};
        }
        auto e = std::make_unique<engine::MockEngine>(ws, std::move(scenario), cfg.value("isolates_processes", true));
        mock = e.get();
        return e;
    }
    if (kind != "command") fail(ErrorCode::InvalidConfig, "unknown engine kind " + kind);
    engine::CommandEngineConfig c;
    c.build_command = str(cfg, "build_command");
    c.run_command = str(cfg, "run_command");
    c.import_command = str(cfg, "import_command");
    c.session_command = str(cfg, "session_command");
    if (cfg.contains("build_timeout_s")) c.build_timeout = std::chrono::seconds(cfg["build_timeout_s"].get<int>());
    if (cfg.contains("run_timeout_s")) c.run_timeout = std::chrono::seconds(cfg["run_timeout_s"].get<int>());
    return std::make_unique<engine::CommandEngine>(ws, c);
}

}  // namespace

GardenSession::GardenSession(std::filesystem::path dir, const AppConfig&) : dir_(std::move(dir)) {}

GardenSession::~GardenSession() {
    if (runner_) runner_->stop();
}

bool GardenSession::exists(const std::filesystem::path& dir) {
    return std::filesystem::exists(dir / kEventsFile) || std::filesystem::exists(dir / kGardenFile);
}

void GardenSession::wire(const AppConfig& config) {
    backups_ = std::make_unique<persistence::BackupStore>(dir_ / "backups");
    provider_ = make_provider(config.provider, replay_);
    engine_ = make_engine(config.engine, engine::Workspace{dir_}, mock_);

    const auto& a = config.assets;
    if (a.contains("index")) {
        index_ = std::make_unique<assets::AssetIndex>(assets::AssetIndex::load(str(a, "index")));
        const auto embedder = str(a, "embedder", "hashing");
        if (embedder == "http") {
            auto c = assets::HttpEmbedderConfig::from_env();
            if (c.api_base.empty()) c.api_base = str(a, "api_base");
            embedder_ = std::make_unique<assets::HttpEmbedder>(c, index_->dim());
        } else {
            embedder_ = std::make_unique<assets::HashingEmbedder>(a.value("dim", index_->dim()));
        }
        auto base = str(a, "source_base", std::filesystem::path(str(a, "index")).parent_path().string());
        source_ = std::make_unique<assets::DefaultAssetSource>(base);
    }
    if (a.contains("mesh_chain")) {
        const auto& m = a["mesh_chain"];
        assets::GeneratedImage image;
        image.bytes = fs::read_file(str(m, "image"));
        image.mime = std::filesystem::path(str(m, "image")).extension() == ".png" ? "image/png"
                                                                                 : "application/octet-stream";
        assets::GeneratedMesh mesh;
        mesh.bytes = fs::read_file(str(m, "mesh"));
        mesh.extension = std::filesystem::path(str(m, "mesh")).extension().string();
        text_to_image_ = std::make_unique<assets::MockTextToImage>(std::move(image));
        image_to_mesh_ = std::make_unique<assets::MockImageToMesh>(std::move(mesh));
    }

    // Resume scripted collaborators.
    if (std::filesystem::exists(dir_ / kCursorFile)) {
        auto cursor = Json::parse(fs::read_file(dir_ / kCursorFile), nullptr, false);
        if (cursor.is_discarded()) fail(ErrorCode::CorruptDocument, "replay cursor");
        if (replay_ && cursor.contains("provider")) {
            for (const auto& [role, n] : cursor["provider"].items()) replay_->skip(role, n.get<std::size_t>());
        }
        if (mock_ && cursor.contains("engine")) {
            for (const auto& [op, n] : cursor["engine"].items()) mock_->skip(op, n.get<std::size_t>());
        }
    }

    orchestrator::Services services;
    services.provider = provider_.get();
    services.engine = engine_.get();
    services.embedder = embedder_.get();
    services.index = index_.get();
    services.source = source_.get();
    services.text_to_image = text_to_image_.get();
    services.image_to_mesh = image_to_mesh_.get();
    orchestrator_ = std::make_unique<orchestrator::Orchestrator>(*garden_, *log_, *backups_, services);
}

std::unique_ptr<GardenSession> GardenSession::create(const std::filesystem::path& dir, const std::string& garden_id,
                                                     const AppConfig& config) {
    if (exists(dir)) fail(ErrorCode::ConflictingIds, "a garden already exists in " + dir.string());
    std::filesystem::create_directories(dir);
    std::unique_ptr<GardenSession> s(new GardenSession(dir, config));
    s->garden_ = std::make_unique<Garden>(config.garden, garden_id);
    s->log_ = std::make_unique<persistence::EventLog>(dir / kEventsFile);
    s->wire(config);
    s->save();
    return s;
}

std::unique_ptr<GardenSession> GardenSession::open(const std::filesystem::path& dir, const AppConfig& config) {
    if (!exists(dir)) fail(ErrorCode::MissingFile, "no garden in " + dir.string());
    std::unique_ptr<GardenSession> s(new GardenSession(dir, config));
    s->log_ = std::make_unique<persistence::EventLog>(dir / kEventsFile);
    auto events = s->log_->events();
    if (events.empty()) {
        s->garden_ = std::make_unique<Garden>(persistence::load_garden(fs::read_file(dir / kGardenFile)));
    } else {
        s->garden_ = std::make_unique<Garden>(persistence::replay_events(events));
    }
    s->wire(config);
    return s;
}

orchestrator::Runner& GardenSession::start_runner() {
    if (!runner_) {
        runner_ = std::make_unique<orchestrator::Runner>(*orchestrator_, [this](const Garden&) { save(); });
        runner_->start();
    }
    return *runner_;
}

void GardenSession::save() {
    fs::write_file(dir_ / kGardenFile, persistence::save_garden(*garden_));
    Json cursor = Json::object();
    if (replay_) {
        Json p = Json::object();
        for (const auto& [role, n] : replay_->consumed()) p[role] = n;
        cursor["provider"] = std::move(p);
    }
    if (mock_) {
        Json e = Json::object();
        for (const auto& [op, n] : mock_->consumed()) e[op] = n;
        cursor["engine"] = std::move(e);
    }
    if (!cursor.empty()) fs::write_file(dir_ / kCursorFile, cursor.dump(2) + "\n");
}

}  // namespace garden::api
