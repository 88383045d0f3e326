#include "garden/api/view.hpp"

#include "garden/util/text.hpp"

namespace garden::api {

using persistence::Json;

namespace {

Json id_or_null(const std::optional<NodeId>& id) { return id ? Json(id->value) : Json(nullptr); }

}  // namespace

Json garden_view(const Garden& g) {
    Json v;
    v["id"] = g.id();
    v["mode"] = to_string(g.mode());
    v["active"] = id_or_null(g.active());
    v["root"] = id_or_null(g.root());
    const auto& c = g.config();
    auto names = Json::array();
    for (const auto& s : c.submodule_roster) names.push_back(s.name);
    v["config"] = Json{{"max_depth", c.max_depth},
                       {"max_branching", c.max_branching},
                       {"max_code_attempts", c.max_code_attempts},
                       {"submodules", std::move(names)}};
    auto nodes = Json::array();
    for (const auto& [id, n] : g.nodes()) {
        Json j;
        j["id"] = id.value;
        j["kind"] = to_string(n.kind);
        j["status"] = to_string(n.status);
        j["is_leaf"] = n.is_leaf;
        j["submodule"] = n.assigned_submodule ? Json(*n.assigned_submodule) : Json(nullptr);
        j["text"] = text::excerpt(n.text, kTextExcerpt);
        j["text_truncated"] = n.text.size() > kTextExcerpt;
        j["parent"] = id_or_null(n.parent);
        j["child_order"] = n.child_order;
        j["depth"] = g.depth(id);
        nodes.push_back(std::move(j));
    }
    v["nodes"] = std::move(nodes);
    auto frontier = Json::array();
    for (const auto& f : g.compute_frontier()) frontier.push_back(Json{{"kind", to_string(f.kind)}, {"node", f.node.value}});
    v["frontier"] = std::move(frontier);
    auto leaves = Json::array();
    for (auto l : g.ordered_leaves()) leaves.push_back(l.value);
    v["ordered_leaves"] = std::move(leaves);
    auto assets = Json::array();
    for (const auto& a : g.assets().records()) assets.push_back(persistence::to_json(a));
    v["assets"] = std::move(assets);
    return v;
}

Json node_view(const Garden& g, NodeId id) {
    const auto& n = g.node(id);
    Json j = persistence::to_json(n);
    j["depth"] = g.depth(id);
    auto children = Json::array();
    for (auto c : g.children(id)) children.push_back(c.value);
    j["children"] = std::move(children);
    if (const auto* a = std::get_if<PipelineAttempt>(&n.payload)) {
        j["screenshots"] = a->screenshots;
        j["feedback"] = a->feedback;
    } else if (const auto* r = std::get_if<EvaluationReport>(&n.payload)) {
        j["feedback"] = r->feedback;
    }
    return j;
}

}  // namespace garden::api
