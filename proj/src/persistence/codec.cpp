#include "garden/persistence/codec.hpp"

#include "garden/codegen/layout.hpp"
#include "garden/error.hpp"

namespace garden::persistence {

namespace {

template <typename T>
T require(std::optional<T> v, std::string_view what, const Json& j) {
    if (!v) fail(ErrorCode::CorruptDocument, "unknown " + std::string(what) + " " + j.dump());
    return *v;
}

template <typename T>
Json opt(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

std::optional<std::string> opt_string(const Json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<std::string>();
}

std::optional<NodeId> opt_node(const Json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return NodeId{j[key].get<std::uint64_t>()};
}

Json node_ref(const std::optional<NodeId>& id) { return id ? Json(id->value) : Json(nullptr); }

Json attempt_to_json(const PipelineAttempt& a) {
    Json j;
    j["index"] = a.index;
    j["bundle"] = to_json(a.bundle);
    j["layout"] = a.layout ? Json(codegen::layout_to_json(*a.layout)) : Json(nullptr);
    j["stage_reached"] = to_string(a.stage_reached);
    j["verdict"] = to_string(a.verdict);
    j["feedback"] = a.feedback;
    j["screenshots"] = a.screenshots;
    j["compiled"] = a.compiled;
    j["content_hash"] = a.content_hash;
    return j;
}

PipelineAttempt attempt_from_json(const Json& j) {
    PipelineAttempt a;
    a.index = j.at("index").get<int>();
    a.bundle = bundle_from_json(j.at("bundle"));
    if (!j.at("layout").is_null()) a.layout = codegen::layout_from_json(nlohmann::json(j["layout"]));
    a.stage_reached = require(stage_from(j.at("stage_reached").get<std::string>()), "stage", j["stage_reached"]);
    a.verdict = require(verdict_from(j.at("verdict").get<std::string>()), "verdict", j["verdict"]);
    a.feedback = j.at("feedback").get<std::string>();
    a.screenshots = j.at("screenshots").get<std::vector<std::string>>();
    a.compiled = j.at("compiled").get<bool>();
    a.content_hash = j.at("content_hash").get<std::string>();
    return a;
}

}  // namespace

Json to_json(const GardenConfig& c) {
    Json j;
    j["max_depth"] = c.max_depth;
    j["max_branching"] = c.max_branching;
    j["max_code_attempts"] = c.max_code_attempts;
    auto roster = Json::array();
    for (const auto& s : c.submodule_roster) {
        roster.push_back(Json{{"name", s.name}, {"description", s.description}, {"executor", to_string(s.executor)}});
    }
    j["submodule_roster"] = std::move(roster);
    j["test_disclaimer"] = c.test_disclaimer;
    j["plan_render_budget"] = c.plan_render_budget;
    j["starter_content"] = c.starter_content;
    return j;
}

GardenConfig config_from_json(const Json& j) {
    auto c = decode("config", [&] {
        GardenConfig c;
        if (!j.is_object()) fail(ErrorCode::InvalidConfig, "config must be an object");
        c.max_depth = j.value("max_depth", c.max_depth);
        c.max_branching = j.value("max_branching", c.max_branching);
        c.max_code_attempts = j.value("max_code_attempts", c.max_code_attempts);
        if (j.contains("submodule_roster")) {
            c.submodule_roster.clear();
            for (const auto& s : j["submodule_roster"]) {
                SubmoduleDescriptor d;
                d.name = s.at("name").get<std::string>();
                d.description = s.value("description", std::string());
                auto exec = s.value("executor", d.name);
                d.executor = require(executor_from(exec), "executor", s);
                c.submodule_roster.push_back(std::move(d));
            }
        }
        c.test_disclaimer = j.value("test_disclaimer", c.test_disclaimer);
        c.plan_render_budget = j.value("plan_render_budget", c.plan_render_budget);
        c.starter_content = j.value("starter_content", c.starter_content);
        return c;
    });
    c.validate();
    return c;
}

Json to_json(const AssetRecord& r) {
    Json j;
    j["asset_id"] = r.asset_id;
    j["display_name"] = r.display_name;
    j["mesh_path"] = r.mesh_path;
    j["origin"] = to_string(r.origin);
    j["preview_image"] = opt(r.preview_image);
    j["origin_node"] = node_ref(r.origin_node);
    return j;
}

AssetRecord asset_from_json(const Json& j) {
    return decode("asset record", [&] {
        AssetRecord r;
        r.asset_id = j.at("asset_id").get<std::string>();
        r.display_name = j.at("display_name").get<std::string>();
        r.mesh_path = j.at("mesh_path").get<std::string>();
        r.origin = require(asset_origin_from(j.at("origin").get<std::string>()), "origin", j);
        r.preview_image = opt_string(j, "preview_image");
        r.origin_node = opt_node(j, "origin_node");
        return r;
    });
}

Json to_json(const CodeBundle& b) {
    Json files = Json::object();
    for (const auto& [path, src] : b.files) files[path] = src;
    return Json{{"files", std::move(files)}, {"summary", b.summary}};
}

CodeBundle bundle_from_json(const Json& j) {
    CodeBundle b;
    for (const auto& [path, src] : j.at("files").items()) b.files[path] = src.get<std::string>();
    b.summary = j.value("summary", std::string());
    return b;
}

Json to_json(const TaskSpec& t) {
    Json parts = Json::object();
    for (const auto& [k, v] : t.prompt_parts) parts[k] = v;
    Json j;
    j["leaf_id"] = t.leaf_id.value;
    j["submodule"] = t.submodule;
    j["prompt_parts"] = std::move(parts);
    j["order_index"] = t.order_index;
    return j;
}

TaskSpec task_from_json(const Json& j) {
    TaskSpec t;
    t.leaf_id = NodeId{j.at("leaf_id").get<std::uint64_t>()};
    t.submodule = j.at("submodule").get<std::string>();
    for (const auto& [k, v] : j.at("prompt_parts").items()) t.prompt_parts[k] = v.get<std::string>();
    t.order_index = j.at("order_index").get<int>();
    return t;
}

Json to_json(const Payload& p) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            Json j;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return Json(nullptr);
            } else if constexpr (std::is_same_v<T, PlanDetail>) {
                j["type"] = "PlanDetail";
                j["detail"] = v.detail;
                j["error"] = v.error;
            } else if constexpr (std::is_same_v<T, TaskSpec>) {
                j["type"] = "TaskSpec";
                j["task"] = to_json(v);
            } else if constexpr (std::is_same_v<T, PipelineAttempt>) {
                j["type"] = "PipelineAttempt";
                j["attempt"] = attempt_to_json(v);
            } else if constexpr (std::is_same_v<T, EvaluationReport>) {
                j["type"] = "EvaluationReport";
                j["verdict"] = to_string(v.verdict);
                j["feedback"] = v.feedback;
                j["source_stage"] = to_string(v.source_stage);
                j["user_edited"] = v.user_edited;
            } else {
                j["type"] = "AssetArtifact";
                j["asset_id"] = opt(v.asset_id);
                j["stage"] = v.stage;
                j["message"] = v.message;
            }
            return j;
        },
        p);
}

Payload payload_from_json(const Json& j) {
    if (j.is_null()) return std::monostate{};
    const auto type = j.at("type").get<std::string>();
    if (type == "PlanDetail") return PlanDetail{j.at("detail").get<std::string>(), j.at("error").get<std::string>()};
    if (type == "TaskSpec") return task_from_json(j.at("task"));
    if (type == "PipelineAttempt") return attempt_from_json(j.at("attempt"));
    if (type == "EvaluationReport") {
        EvaluationReport r;
        r.verdict = require(verdict_from(j.at("verdict").get<std::string>()), "verdict", j);
        r.feedback = j.at("feedback").get<std::string>();
        r.source_stage = require(source_stage_from(j.at("source_stage").get<std::string>()), "source stage", j);
        r.user_edited = j.at("user_edited").get<bool>();
        return r;
    }
    if (type == "AssetArtifact") {
        return AssetArtifact{opt_string(j, "asset_id"), j.at("stage").get<std::string>(),
                             j.at("message").get<std::string>()};
    }
    fail(ErrorCode::CorruptDocument, "unknown payload type " + type);
}

Json to_json(const GardenNode& n) {
    Json j;
    j["id"] = n.id.value;
    j["kind"] = to_string(n.kind);
    j["parent"] = node_ref(n.parent);
    j["child_order"] = n.child_order;
    j["text"] = n.text;
    j["is_leaf"] = n.is_leaf;
    j["submodule"] = opt(n.assigned_submodule);
    j["status"] = to_string(n.status);
    j["payload"] = to_json(n.payload);
    return j;
}

GardenNode node_from_json(const Json& j) {
    return decode("node", [&] {
        GardenNode n;
        n.id = NodeId{j.at("id").get<std::uint64_t>()};
        n.kind = require(node_kind_from(j.at("kind").get<std::string>()), "node kind", j["kind"]);
        n.parent = opt_node(j, "parent");
        n.child_order = j.at("child_order").get<int>();
        n.text = j.at("text").get<std::string>();
        n.is_leaf = j.at("is_leaf").get<bool>();
        n.assigned_submodule = opt_string(j, "submodule");
        n.status = require(node_status_from(j.at("status").get<std::string>()), "status", j["status"]);
        n.payload = payload_from_json(j.at("payload"));
        return n;
    });
}

Json to_json(const Garden& g) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["id"] = g.id();
    j["config"] = to_json(g.config());
    j["mode"] = to_string(g.mode());
    j["active"] = node_ref(g.active());
    j["next_id"] = g.next_id();
    auto nodes = Json::array();
    for (const auto& [id, n] : g.nodes()) nodes.push_back(to_json(n));
    j["nodes"] = std::move(nodes);
    auto assets = Json::array();
    for (const auto& r : g.assets().records()) assets.push_back(to_json(r));
    j["assets"] = std::move(assets);
    return j;
}

Garden garden_from_json(const Json& j) {
    return decode("garden", [&] {
        if (!j.is_object() || !j.contains("schema_version")) fail(ErrorCode::CorruptDocument, "not a garden document");
        auto version = j["schema_version"].get<int>();
        if (version != kSchemaVersion) {
            fail(ErrorCode::VersionMismatch, "schema version " + std::to_string(version) + ", expected " +
                                                 std::to_string(kSchemaVersion));
        }
        Garden g(config_from_json(j.at("config")), j.at("id").get<std::string>());
        g.set_mode(require(mode_from(j.at("mode").get<std::string>()), "mode", j["mode"]));
        // Nodes are stored by id; parents always have smaller ids except after
        // restores, so insert in passes until everything is placed.
        std::vector<GardenNode> pending;
        for (const auto& nj : j.at("nodes")) pending.push_back(node_from_json(nj));
        while (!pending.empty()) {
            std::vector<GardenNode> next;
            for (auto& n : pending) {
                if (n.parent && !g.contains(*n.parent)) {
                    next.push_back(std::move(n));
                } else {
                    g.insert_node(n);
                }
            }
            if (next.size() == pending.size()) fail(ErrorCode::CorruptDocument, "nodes with unreachable parents");
            pending = std::move(next);
        }
        for (const auto& aj : j.at("assets")) g.assets().add(asset_from_json(aj));
        g.set_next_id(j.at("next_id").get<std::uint64_t>());
        g.set_active(opt_node(j, "active"));
        g.check_invariants();
        return g;
    });
}

std::string save_garden(const Garden& g) { return to_json(g).dump(2) + "\n"; }

Garden load_garden(std::string_view document) {
    auto j = Json::parse(document, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::CorruptDocument, "garden document is not valid JSON");
    return garden_from_json(j);
}

}  // namespace garden::persistence
