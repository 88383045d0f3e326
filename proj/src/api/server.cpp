#include "garden/api/server.hpp"

#include <httplib.h>

#include <regex>

#include "garden/api/view.hpp"

namespace garden::api {

namespace {

using persistence::Json;
using orchestrator::Orchestrator;
using orchestrator::UserEdit;

void send_json(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
    send_json(res, status, Json{{"error", code}, {"message", message}});
}

Json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return Json::object();
    auto j = Json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail(ErrorCode::InvalidTarget, "request body must be a JSON object");
    return j;
}

NodeId node_param(const httplib::Request& req, std::size_t index) {
    return NodeId{std::stoull(req.matches[index].str())};
}

Json step_json(const orchestrator::StepOutcome& out) {
    Json j;
    j["idle"] = out.idle;
    j["item"] = out.item ? Json{{"kind", to_string(out.item->kind)}, {"node", out.item->node.value}} : Json(nullptr);
    j["result"] = out.result;
    return j;
}

Json invalidation_json(const orchestrator::InvalidationSet& s) {
    auto ids = [](const std::vector<NodeId>& v) {
        auto arr = Json::array();
        for (auto id : v) arr.push_back(id.value);
        return arr;
    };
    return Json{{"removed", ids(s.removed)},
                {"modified", ids(s.modified)},
                {"retracted", s.retracted},
                {"reason", s.reason},
                {"backup_id", s.backup_id ? Json(*s.backup_id) : Json(nullptr)}};
}

std::string sse_frame(const persistence::GardenEvent& e) {
    return "id: " + std::to_string(e.seq) + "\nevent: " + e.type + "\ndata: " + e.to_line() + "\n\n";
}

}  // namespace

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownNode:
        case ErrorCode::UnknownParent:
        case ErrorCode::UnknownBackup:
        case ErrorCode::MissingFile: return 404;
        case ErrorCode::InvalidTarget:
        case ErrorCode::EmptyText:
        case ErrorCode::UnknownSubmodule:
        case ErrorCode::InvalidConfig: return 422;
        case ErrorCode::SeedAlreadyExists:
        case ErrorCode::KindViolation:
        case ErrorCode::LeafViolation:
        case ErrorCode::PreconditionViolation:
        case ErrorCode::SnapshotMissing:
        case ErrorCode::ConflictingIds:
        case ErrorCode::ScriptExhausted:
        case ErrorCode::ScriptMismatch:
        case ErrorCode::ScenarioExhausted: return 409;
        case ErrorCode::EngineUnavailable:
        case ErrorCode::TransportError:
        case ErrorCode::ToolchainMissing: return 503;
        default: return 500;
    }
}

bool valid_garden_id(const std::string& id) {
    static const std::regex re("[A-Za-z0-9_-]{1,64}");
    return std::regex_match(id, re);
}

ApiServer::ApiServer(std::filesystem::path workspace_root, AppConfig config)
    : root_(std::move(workspace_root)), config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
    std::filesystem::create_directories(root_);
    routes();
}

ApiServer::~ApiServer() { stop(); }

GardenSession& ApiServer::session(const std::string& garden_id) {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(garden_id);
    if (it != sessions_.end()) return *it->second;
    if (!valid_garden_id(garden_id) || !GardenSession::exists(root_ / garden_id)) {
        fail(ErrorCode::UnknownNode, "unknown garden " + garden_id);
    }
    auto s = GardenSession::open(root_ / garden_id, config_);
    s->start_runner();
    return *sessions_.emplace(garden_id, std::move(s)).first->second;
}

GardenSession& ApiServer::create_session(const std::string& garden_id, const AppConfig& config) {
    std::lock_guard lock(mu_);
    if (sessions_.count(garden_id)) fail(ErrorCode::ConflictingIds, "garden " + garden_id + " exists");
    auto s = GardenSession::create(root_ / garden_id, garden_id, config);
    s->start_runner();
    return *sessions_.emplace(garden_id, std::move(s)).first->second;
}

void ApiServer::routes() {
    auto& svr = *server_;

    svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
            std::rethrow_exception(ep);
        } catch (const Error& e) {
            send_error(res, http_status(e.code()), std::string(to_string(e.code())), e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "Internal", e.what());
        }
    });

    svr.Post("/gardens", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_body(req);
        AppConfig cfg = config_;
        if (body.contains("config")) cfg.garden = persistence::config_from_json(body["config"]);
        std::string id = body.value("id", std::string());
        if (id.empty()) {
            for (int n = 1;; ++n) {
                id = "g" + std::to_string(n);
                if (!GardenSession::exists(root_ / id)) break;
            }
        }
        if (!valid_garden_id(id)) fail(ErrorCode::InvalidTarget, "invalid garden id " + id);
        auto& s = create_session(id, cfg);
        send_json(res, 201, garden_view(*s.runner()->snapshot()));
    });

    svr.Post(R"(/gardens/([^/]+)/seed)", [this](const httplib::Request& req, httplib::Response& res) {
        auto& s = session(req.matches[1]);
        auto body = parse_body(req);
        if (!body.contains("text") || !body["text"].is_string()) fail(ErrorCode::InvalidTarget, "seed needs text");
        auto text = body["text"].get<std::string>();
        auto id = s.runner()->call([&](Orchestrator& o) { return o.seed(text); });
        send_json(res, 201, Json{{"node", id.value}});
    });

    svr.Get(R"(/gardens/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        auto& s = session(req.matches[1]);
        send_json(res, 200, garden_view(*s.runner()->snapshot()));
    });

    svr.Get(R"(/gardens/([^/]+)/nodes/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
        auto& s = session(req.matches[1]);
        send_json(res, 200, node_view(*s.runner()->snapshot(), node_param(req, 2)));
    });

    svr.Post(R"(/gardens/([^/]+)/step)", [this](const httplib::Request& req, httplib::Response& res) {
        auto& s = session(req.matches[1]);
        auto body = parse_body(req);
        const int count = body.value("count", 1);
        if (count < 1) fail(ErrorCode::InvalidTarget, "count must be positive");
        auto outcomes = s.runner()->call([&](Orchestrator& o) {
            if (o.garden().mode() == Mode::Paused) o.set_mode(Mode::Step, persistence::Actor::User);
            auto arr = Json::array();
            for (int i = 0; i < count; ++i) {
                auto out = o.step();
                arr.push_back(step_json(out));
                if (out.idle) break;
            }
            return arr;
        });
        send_json(res, 200, Json{{"steps", outcomes}});
    });

    svr.Post(R"(/gardens/([^/]+)/mode)", [this](const httplib::Request& req, httplib::Response& res) {
        auto& s = session(req.matches[1]);
        auto body = parse_body(req);
        std::optional<Mode> mode;
        if (body.contains("mode") && body["mode"].is_string()) mode = mode_from(body["mode"].get<std::string>());
        if (!mode) fail(ErrorCode::InvalidTarget, "mode must be play, pause or step");
        s.runner()->call([&](Orchestrator& o) { return o.apply_edit(UserEdit::set_mode(*mode)); });
        send_json(res, 200, Json{{"mode", to_string(*mode)}});
    });

    svr.Patch(R"(/gardens/([^/]+)/nodes/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
        auto& s = session(req.matches[1]);
        auto body = parse_body(req);
        const NodeId id = node_param(req, 2);
        const int fields = body.contains("is_leaf") + body.contains("text") + body.contains("feedback");
        if (fields != 1) fail(ErrorCode::InvalidTarget, "exactly one of is_leaf, text, feedback is required");
        UserEdit edit;
        if (body.contains("is_leaf")) {
            if (!body["is_leaf"].is_boolean()) fail(ErrorCode::InvalidTarget, "is_leaf must be a boolean");
            std::optional<std::string> submodule;
            if (body.contains("submodule") && body["submodule"].is_string()) submodule = body["submodule"];
            edit = UserEdit::toggle_leaf(id, body["is_leaf"].get<bool>(), submodule);
        } else if (body.contains("text")) {
            if (!body["text"].is_string()) fail(ErrorCode::InvalidTarget, "text must be a string");
            edit = UserEdit::edit_text(id, body["text"].get<std::string>());
        } else {
            if (!body["feedback"].is_string()) fail(ErrorCode::InvalidTarget, "feedback must be a string");
            edit = UserEdit::edit_feedback(id, body["feedback"].get<std::string>());
        }
        auto result = s.runner()->call([&](Orchestrator& o) { return o.apply_edit(edit); });
        send_json(res, 200, invalidation_json(result));
    });

    svr.Post(R"(/gardens/([^/]+)/nodes/(\d+)/compile-and-run)",
             [this](const httplib::Request& req, httplib::Response& res) {
                 auto& s = session(req.matches[1]);
                 const NodeId id = node_param(req, 2);
                 auto handle = s.runner()->call([&](Orchestrator& o) { return o.compile_and_run_at(id); });
                 send_json(res, 200,
                           Json{{"session_id", handle.session_id},
                                {"source_dir", handle.source_dir.string()},
                                {"layout_file", handle.layout_file.string()},
                                {"pid", handle.pid}});
             });

    svr.Post(R"(/gardens/([^/]+)/backups/([^/]+)/restore)",
             [this](const httplib::Request& req, httplib::Response& res) {
                 auto& s = session(req.matches[1]);
                 const std::string backup = req.matches[2];
                 s.runner()->call([&](Orchestrator& o) {
                     o.restore_backup(backup);
                     return 0;
                 });
                 send_json(res, 200, Json{{"restored", backup}});
             });

    svr.Get(R"(/gardens/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
        auto& s = session(req.matches[1]);
        std::uint64_t from = 1;
        if (req.has_param("from")) from = std::stoull(req.get_param_value("from"));
        if (req.has_header("Last-Event-ID")) from = std::stoull(req.get_header_value("Last-Event-ID")) + 1;
        const bool follow = !req.has_param("follow") || req.get_param_value("follow") != "0";
        auto* log = &s.log();
        if (!follow) {
            std::string body;
            for (const auto& e : log->since(from)) body += sse_frame(e);
            res.set_content(body, "text/event-stream");
            return;
        }
        auto next = std::make_shared<std::uint64_t>(from);
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider("text/event-stream", [this, log, next](std::size_t, httplib::DataSink& sink) {
            if (stopping_) {
                sink.done();
                return true;
            }
            auto batch = log->since(*next);
            if (batch.empty()) {
                if (!log->wait_for(*next, std::chrono::milliseconds(500))) {
                    return sink.write(": keep-alive\n\n", 14);
                }
                batch = log->since(*next);
            }
            for (const auto& e : batch) {
                auto frame = sse_frame(e);
                if (!sink.write(frame.data(), frame.size())) return false;
                *next = e.seq + 1;
            }
            return true;
        });
    });
}

int ApiServer::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    if (!server_->bind_to_port(host, port)) fail(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void ApiServer::listen() { server_->listen_after_bind(); }

int ApiServer::start_background(const std::string& host, int port) {
    int bound = bind(host, port);
    if (bound <= 0) fail(ErrorCode::IoError, "cannot bind " + host);
    thread_ = std::thread([this] { listen(); });
    server_->wait_until_ready();
    return bound;
}

void ApiServer::stop() {
    stopping_ = true;
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
    std::lock_guard lock(mu_);
    for (auto& [id, s] : sessions_) {
        if (s->runner()) s->runner()->stop();
    }
}

}  // namespace garden::api
