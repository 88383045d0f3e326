#pragma once

// Shared helpers for unit and acceptance tests: scratch directories, fixture
// lookup, random garden builders and from-scratch oracles.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "garden/core/garden.hpp"
#include "garden/llm/replay_provider.hpp"
#include "garden/orchestrator/edits.hpp"
#include "garden/persistence/journal.hpp"

#ifndef GARDEN_FIXTURE_DIR
#define GARDEN_FIXTURE_DIR "tests/fixtures"
#endif

namespace garden::testing {

inline std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(GARDEN_FIXTURE_DIR) / rel; }

class TempDir {
public:
    explicit TempDir(const std::string& tag = "garden") {
        auto base = std::filesystem::temp_directory_path() / (tag + "-XXXXXX");
        std::string s = base.string();
        if (!::mkdtemp(s.data())) throw std::runtime_error("mkdtemp failed");
        path_ = s;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

// ---- Oracles computed from the raw node map only ----

inline std::vector<NodeId> oracle_children(const Garden& g, NodeId id) {
    std::vector<const GardenNode*> kids;
    for (const auto& [_, n] : g.nodes()) {
        if (n.parent && *n.parent == id) kids.push_back(&n);
    }
    std::sort(kids.begin(), kids.end(), [](auto* a, auto* b) { return a->child_order < b->child_order; });
    std::vector<NodeId> out;
    for (auto* k : kids) out.push_back(k->id);
    return out;
}

inline std::vector<NodeId> oracle_preorder(const Garden& g) {
    std::vector<NodeId> out;
    std::function<void(NodeId)> visit = [&](NodeId id) {
        out.push_back(id);
        for (auto c : oracle_children(g, id)) visit(c);
    };
    for (const auto& [id, n] : g.nodes()) {
        if (!n.parent) visit(id);
    }
    return out;
}

inline std::vector<NodeId> oracle_leaves(const Garden& g) {
    std::vector<NodeId> out;
    for (auto id : oracle_preorder(g)) {
        const auto& n = g.node(id);
        if (n.kind == NodeKind::PlanStep && n.is_leaf) out.push_back(id);
    }
    return out;
}

inline int oracle_depth(const Garden& g, NodeId id) {
    int d = 0;
    for (auto p = g.node(id).parent; p; p = g.node(*p).parent) ++d;
    return d;
}

// True when `anc` is a strict ancestor of `id`.
inline bool strictly_below(const Garden& g, NodeId id, NodeId anc) {
    for (auto p = g.node(id).parent; p; p = g.node(*p).parent) {
        if (*p == anc) return true;
    }
    return false;
}

inline std::set<NodeId> strict_descendants(const Garden& g, NodeId anc) {
    std::set<NodeId> out;
    for (const auto& [id, _] : g.nodes()) {
        if (strictly_below(g, id, anc)) out.insert(id);
    }
    return out;
}

struct OracleCascade {
    std::set<NodeId> removed;
    std::set<NodeId> modified;
    std::set<std::string> retracted;
};

// Brute-force invalidation set for a ToggleLeaf, EditNodeText or EditFeedback
// edit that is known to be accepted.
inline OracleCascade oracle_cascade(const Garden& g, const orchestrator::UserEdit& edit) {
    using orchestrator::EditKind;
    OracleCascade out;
    const NodeId target = *edit.target;
    if (edit.kind == EditKind::EditNodeText) {
        out.modified.insert(target);
        return out;
    }
    NodeId pivot = target;  // later leaves are counted from here
    out.modified.insert(target);
    out.removed = strict_descendants(g, target);
    if (edit.kind == EditKind::EditFeedback) {
        NodeId t = target;
        while (g.node(t).kind != NodeKind::Task) t = *g.node(t).parent;
        out.modified.insert(t);
        pivot = *g.node(t).parent;
    }
    const auto order = oracle_preorder(g);
    const auto pivot_pos = std::find(order.begin(), order.end(), pivot) - order.begin();
    for (std::size_t i = static_cast<std::size_t>(pivot_pos) + 1; i < order.size(); ++i) {
        const auto& leaf = g.node(order[i]);
        if (leaf.kind != NodeKind::PlanStep || !leaf.is_leaf || strictly_below(g, leaf.id, pivot)) continue;
        for (auto c : oracle_children(g, leaf.id)) {
            const auto& t = g.node(c);
            if (t.kind != NodeKind::Task) continue;
            auto chain = strict_descendants(g, t.id);
            if (!chain.empty() || t.status != NodeStatus::Pending) out.modified.insert(t.id);
            out.removed.insert(chain.begin(), chain.end());
        }
    }
    for (const auto& r : g.assets().records()) {
        if (r.origin_node && out.removed.count(*r.origin_node)) out.retracted.insert(r.asset_id);
    }
    return out;
}

// ---- Random gardens ----

inline GardenConfig random_config(std::mt19937_64& rng) {
    GardenConfig c;
    c.max_depth = std::uniform_int_distribution<int>(1, 4)(rng);
    c.max_branching = std::uniform_int_distribution<int>(1, 4)(rng);
    c.max_code_attempts = 3;
    return c;
}

// Builds a well-formed garden through the journal: a plan tree within the
// bounds, tasks on most leaves, and implementation chains with registered
// assets. Stops adding nodes at `max_nodes`.
inline void grow_random_garden(persistence::Journal& j, std::mt19937_64& rng, std::size_t max_nodes) {
    auto& g = j.garden();
    const auto& cfg = g.config();
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    auto full = [&] { return g.size() >= max_nodes; };
    const auto roster = cfg.submodule_roster;
    auto pick_submodule = [&] {
        return roster[std::uniform_int_distribution<std::size_t>(0, roster.size() - 1)(rng)].name;
    };

    std::vector<NodeId> queue{j.add_seed("seed " + std::to_string(rng() % 1000), persistence::Actor::User)};
    for (std::size_t qi = 0; qi < queue.size() && !full(); ++qi) {
        const NodeId id = queue[qi];
        const int depth = g.depth(id);
        if (depth >= cfg.max_depth || coin(rng) < 0.15) continue;
        const int k = std::uniform_int_distribution<int>(1, cfg.max_branching)(rng);
        for (int i = 0; i < k && !full(); ++i) {
            const bool leaf = depth + 1 == cfg.max_depth || coin(rng) < 0.45;
            auto child = j.add_child(id, NodeKind::PlanStep, "step " + std::to_string(g.next_id()), leaf,
                                     leaf ? std::optional<std::string>(pick_submodule()) : std::nullopt,
                                     PlanDetail{});
            if (!leaf) queue.push_back(child);
        }
        GardenNode n = g.node(id);
        n.status = NodeStatus::Succeeded;
        j.update(n);
    }

    std::vector<NodeId> leaves = g.ordered_leaves();
    for (std::size_t li = 0; li < leaves.size() && !full(); ++li) {
        const NodeId leaf = leaves[li];
        if (coin(rng) < 0.25) continue;
        const auto submodule = *g.node(leaf).assigned_submodule;
        GardenNode ln = g.node(leaf);
        ln.status = NodeStatus::Succeeded;
        j.update(ln);
        TaskSpec spec;
        spec.leaf_id = leaf;
        spec.submodule = submodule;
        spec.prompt_parts["description"] = "task for " + to_string(leaf);
        spec.order_index = static_cast<int>(li);
        const NodeId task = j.add_child(leaf, NodeKind::Task, "task", false, std::nullopt, spec);
        const auto executor = cfg.find_submodule(submodule)->executor;
        if (executor == Executor::DiffusionMesh || executor == Executor::MeshDownloader) {
            if (full() || coin(rng) < 0.3) continue;
            const auto art = j.add_child(task, NodeKind::AssetArtifact, "asset", false, std::nullopt, AssetArtifact{});
            AssetRecord r;
            r.asset_id = "asset-" + to_string(art);
            r.display_name = "asset";
            r.mesh_path = "assets/" + r.asset_id + "/mesh.obj";
            r.origin = executor == Executor::DiffusionMesh ? AssetOrigin::Generated : AssetOrigin::Downloaded;
            r.origin_node = art;
            j.register_asset(r);
            GardenNode a = g.node(art);
            a.status = NodeStatus::Succeeded;
            a.payload = AssetArtifact{r.asset_id, "", ""};
            j.update(a);
            GardenNode t = g.node(task);
            t.status = NodeStatus::Succeeded;
            j.update(t);
            continue;
        }
        const int pairs = std::uniform_int_distribution<int>(0, 3)(rng);
        NodeId parent = task;
        for (int p = 1; p <= pairs && g.size() + 2 <= max_nodes; ++p) {
            const bool pass = p == pairs && coin(rng) < 0.5;
            PipelineAttempt attempt;
            attempt.index = p;
            attempt.bundle.files["A.h"] = "class AThing" + std::to_string(p) + " : public AActor {};";
            attempt.stage_reached = pass ? Stage::VisuallyEvaluated : Stage::Compiled;
            attempt.verdict = pass ? Verdict::Pass : Verdict::Fail;
            attempt.compiled = true;
            attempt.layout = LayoutSpec{{ActorPlacement{"AThing", {0, 0, 0}, {0, 0, 0}, {1, 1, 1}, {}}}};
            const auto a = j.add_child(parent, NodeKind::CodeAttempt, "attempt", false, std::nullopt, attempt);
            EvaluationReport rep;
            rep.verdict = attempt.verdict;
            rep.feedback = pass ? "looks right" : "wrong";
            rep.source_stage = pass ? SourceStage::Visual : SourceStage::Placement;
            const auto e = j.add_child(a, NodeKind::Evaluation, "evaluation", false, std::nullopt, rep);
            for (auto id : {a, e}) {
                GardenNode n = g.node(id);
                n.status = pass ? NodeStatus::Succeeded : NodeStatus::Failed;
                j.update(n);
            }
            if (pass && executor == Executor::ProceduralMesh) {
                AssetRecord r;
                r.asset_id = "procedural-" + to_string(a);
                r.display_name = "AThing";
                r.mesh_path = "source/task/A.h";
                r.origin = AssetOrigin::Procedural;
                r.origin_node = a;
                j.register_asset(r);
            }
            parent = e;
        }
        if (const auto* last = std::get_if<EvaluationReport>(&g.node(parent).payload)) {
            GardenNode t = g.node(task);
            t.status = last->verdict == Verdict::Pass ? NodeStatus::Succeeded : NodeStatus::InProgress;
            j.update(t);
        }
    }
}

// A random accepted-or-rejected edit for `g`; nullopt when the garden has no plan steps.
inline std::optional<orchestrator::UserEdit> random_edit(const Garden& g, std::mt19937_64& rng) {
    using orchestrator::UserEdit;
    std::vector<NodeId> plan_steps, plan_nodes, evaluations;
    for (const auto& [id, n] : g.nodes()) {
        if (n.kind == NodeKind::PlanStep) plan_steps.push_back(id);
        if (n.kind == NodeKind::PlanStep || n.kind == NodeKind::Seed) plan_nodes.push_back(id);
        if (n.kind == NodeKind::Evaluation) evaluations.push_back(id);
    }
    auto pick = [&](const std::vector<NodeId>& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
    const int roll = std::uniform_int_distribution<int>(0, 9)(rng);
    if (roll < 2 && !plan_nodes.empty()) return UserEdit::edit_text(pick(plan_nodes), "edited " + std::to_string(rng() % 100));
    if (roll < 5 && !evaluations.empty()) return UserEdit::edit_feedback(pick(evaluations), "make it taller");
    if (plan_steps.empty()) return std::nullopt;
    const NodeId x = pick(plan_steps);
    const bool to_leaf = !g.node(x).is_leaf;
    std::optional<std::string> submodule;
    if (to_leaf && rng() % 2) submodule = g.config().submodule_roster[rng() % g.config().submodule_roster.size()].name;
    return UserEdit::toggle_leaf(x, to_leaf, submodule);
}

// ---- Random over-producing plan scripts ----

inline std::string numbered_steps(std::mt19937_64& rng, int count, double leaf_prob, const std::string& submodule) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::string out = "DETAIL: restated goal " + std::to_string(rng() % 1000) + "\n\n";
    for (int i = 1; i <= count; ++i) {
        out += std::to_string(i) + ". Step " + std::to_string(rng() % 100000);
        if (coin(rng) < leaf_prob) out += " [LEAF: " + submodule + "]";
        out += "\n";
    }
    return out;
}

// Queues planner responses that ask for up to three times max_branching children
// at every level, plus roster and task-generator answers for `submodule`.
inline void push_overproducing_script(llm::ReplayProvider& p, std::mt19937_64& rng, const GardenConfig& cfg,
                                      const std::string& submodule, int budget = 400) {
    std::uniform_int_distribution<int> count(1, 3 * cfg.max_branching + 1);
    p.push(llm::roles::kBroadPlanner, numbered_steps(rng, count(rng), 0.3, submodule));
    std::string roster;
    for (int i = 1; i <= 3 * cfg.max_branching + 2; ++i) roster += std::to_string(i) + ". " + submodule + "\n";
    for (int i = 0; i < budget; ++i) {
        p.push(llm::roles::kSubPlanner, numbered_steps(rng, count(rng), 0.3, submodule));
        p.push(llm::roles::kRosterAssign, roster);
        p.push(llm::roles::kTaskGenerator, "DESCRIPTION: object number " + std::to_string(i));
    }
}

}  // namespace garden::testing
