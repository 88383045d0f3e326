// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

#include "garden/api/session.hpp"
#include "garden/assets/asset_index.hpp"
#include "garden/codegen/layout.hpp"
#include "garden/error.hpp"
#include "garden/persistence/codec.hpp"
#include "garden/util/fs.hpp"
#include "support.hpp"

using namespace garden;
using namespace garden::testing;
using persistence::Json;
using orchestrator::Orchestrator;
using orchestrator::UserEdit;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream why;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) why << what;
        ok = ok && cond;
    }
};

// Every acceptance run ends here: the log must rebuild the live garden byte for byte.
bool replay_matches(const Garden& live, const persistence::EventLog& log) {
    return persistence::save_garden(persistence::replay_events(log.events())) == persistence::save_garden(live);
}

int replay_checks = 0;
int replay_failures = 0;
void note_replay(const Garden& live, const persistence::EventLog& log) {
    ++replay_checks;
    if (!replay_matches(live, log)) ++replay_failures;
}

std::vector<persistence::GardenEvent> of_type(const persistence::EventLog& log, const std::string& type) {
    std::vector<persistence::GardenEvent> out;
    for (const auto& e : log.events()) {
        if (e.type == type) out.push_back(e);
    }
    return out;
}

std::string code_response(const std::string& cls) {
    return "Implementation.\n\n```cpp\n// FILE: " + cls + ".h\n#pragma once\nclass " + cls +
           " : public AActor {\n  GENERATED_BODY()\n};\n```\n";
}

std::string layout_response(const std::string& cls) {
    return "```json\n{\"actors\": [{\"class\": \"" + cls +
           "\", \"position\": [0, 0, 0], \"rotation\": [0, 0, 0], \"scale\": [1, 1, 1], \"properties\": {}}]}\n```\n";
}

// ---------------------------------------------------------------------------

int screenshot_runs = 0;
int screenshot_failures = 0;
int visual_requests = 0;
int visual_failures = 0;

void audit_screenshots(const Garden& g, const std::filesystem::path& root, const llm::ReplayProvider& p) {
    for (const auto& [id, n] : g.nodes()) {
        const auto* a = std::get_if<PipelineAttempt>(&n.payload);
        if (!a) continue;
        const bool ran = a->stage_reached == Stage::Ran || a->stage_reached == Stage::VisuallyEvaluated;
        if (!ran) {
            if (!a->screenshots.empty()) ++screenshot_failures;
            continue;
        }
        ++screenshot_runs;
        bool ok = a->screenshots.size() == 6;
        for (const auto& s : a->screenshots) ok = ok && std::filesystem::exists(root / s);
        if (!ok) ++screenshot_failures;
    }
    for (const auto& c : p.captured()) {
        if (c.request.role_tag == llm::roles::kVisualEval) {
            ++visual_requests;
            if (c.request.images.size() != 6) ++visual_failures;
        } else if (!c.request.images.empty()) {
            ++visual_failures;
        }
    }
}

Check criterion_sheep() {
    Check c;
    TempDir tmp("sheep");
    auto cfg = api::AppConfig::load(fixture("sheep/config.json"));
    const auto expected = Json::parse(fs::read_file(fixture("sheep/expected.json")));
    auto session = api::GardenSession::create(tmp / "garden", "sheep", cfg);
    session->orchestrator().seed(expected["seed"].get<std::string>());
    auto& runner = session->start_runner();

    const auto t0 = std::chrono::steady_clock::now();
    runner.call([](Orchestrator& o) {
        o.set_mode(Mode::Play);
        return 0;
    });
    while (runner.playing() && std::chrono::steady_clock::now() - t0 < std::chrono::seconds(10)) {
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    runner.stop();
    c.expect(runner.last_error().empty(), "play error: " + runner.last_error() + "; ");
    c.expect(secs < 10.0, "play took " + std::to_string(secs) + " s; ");

    const Garden& g = session->garden();
    c.expect(g.compute_frontier().empty(), "frontier not empty; ");
    const auto& counts = expected["counts"];
    c.expect(g.size() == counts["total"].get<std::size_t>(), "node total " + std::to_string(g.size()) + "; ");
    std::map<std::string, std::size_t> by_kind;
    int max_depth = 0;
    for (const auto& [id, n] : g.nodes()) {
        ++by_kind[std::string(to_string(n.kind))];
        if (n.kind == NodeKind::PlanStep) max_depth = std::max(max_depth, oracle_depth(g, id));
    }
    for (const auto& [kind, n] : counts.items()) {
        if (kind == "total") continue;
        c.expect(by_kind[kind] == n.get<std::size_t>(), "count of " + kind + "; ");
    }
    c.expect(max_depth == expected["max_depth_reached"].get<int>(), "depth reached; ");
    for (const auto& e : expected["nodes"]) {
        const NodeId id{e["id"].get<std::uint64_t>()};
        const auto* n = g.find(id);
        if (!n) {
            c.expect(false, "missing node " + to_string(id) + "; ");
            continue;
        }
        c.expect(to_string(n->kind) == e["kind"].get<std::string>(), "kind of " + to_string(id) + "; ");
        c.expect(to_string(n->status) == e["status"].get<std::string>(), "status of " + to_string(id) + "; ");
        const bool want_parent = !e["parent"].is_null();
        c.expect(n->parent.has_value() == want_parent &&
                     (!want_parent || n->parent->value == e["parent"].get<std::uint64_t>()),
                 "parent of " + to_string(id) + "; ");
        const bool want_leaf = e.contains("leaf");
        c.expect(n->is_leaf == want_leaf, "leaf flag of " + to_string(id) + "; ");
        if (want_leaf) c.expect(n->assigned_submodule == e["leaf"].get<std::string>(), "submodule; ");
    }
    std::vector<std::uint64_t> leaves;
    for (auto id : oracle_leaves(g)) leaves.push_back(id.value);
    c.expect(leaves == expected["ordered_leaves"].get<std::vector<std::uint64_t>>(), "leaf order; ");
    const auto& records = g.assets().records();
    c.expect(records.size() == expected["assets"].size(), "asset count; ");
    for (std::size_t i = 0; i < std::min(records.size(), expected["assets"].size()); ++i) {
        c.expect(records[i].asset_id == expected["assets"][i]["asset_id"].get<std::string>(), "asset id; ");
        c.expect(to_string(records[i].origin) == expected["assets"][i]["origin"].get<std::string>(), "asset origin; ");
    }
    c.expect(session->replay_provider()->remaining_total() == 0, "unused script entries; ");

    // Event sourcing on disk: events.log rebuilds the saved document exactly.
    session->save();
    const auto saved = fs::read_file(tmp / "garden" / "garden.json");
    const auto rebuilt =
        persistence::save_garden(persistence::replay_events(persistence::read_event_file(tmp / "garden" / "events.log")));
    ++replay_checks;
    if (saved != rebuilt || saved != persistence::save_garden(g)) ++replay_failures;
    audit_screenshots(g, tmp / "garden", *session->replay_provider());

    if (c.ok) c.why << g.size() << " nodes, play " << std::fixed << std::setprecision(3) << secs << " s";
    return c;
}

// ---------------------------------------------------------------------------

Check criterion_bounds_and_order(Check& order) {
    Check c;
    int violations = 0;
    int units = 0;
    int order_failures = 0;
    for (int run = 0; run < 100; ++run) {
        std::mt19937_64 rng(1000 + run);
        TempDir tmp("bounds");
        GardenConfig cfg = random_config(rng);
        Garden g(cfg, "run" + std::to_string(run));
        persistence::EventLog log;
        persistence::BackupStore backups;
        llm::ReplayProvider provider;
        push_overproducing_script(provider, rng, cfg, "diffusion_mesh");
        engine::MockScenario sc;
        sc.import_default = engine::MockImport{};
        engine::MockEngine eng(engine::Workspace{tmp.path()}, sc);
        assets::MockTextToImage t2i(assets::GeneratedImage{"image/png", "img"});
        assets::MockImageToMesh i2m(assets::GeneratedMesh{".glb", "glTF"});
        orchestrator::Services s;
        s.provider = &provider;
        s.engine = &eng;
        s.text_to_image = &t2i;
        s.image_to_mesh = &i2m;
        Orchestrator o(g, log, backups, s);
        o.seed("over-producing run " + std::to_string(run));

        auto audit = [&] {
            for (const auto& [id, n] : g.nodes()) {
                if (n.kind != NodeKind::PlanStep && n.kind != NodeKind::Seed) continue;
                const int d = oracle_depth(g, id);
                int plan_kids = 0;
                for (auto k : oracle_children(g, id)) plan_kids += g.node(k).kind == NodeKind::PlanStep;
                if (d > cfg.max_depth) ++violations;
                if (plan_kids > cfg.max_branching) ++violations;
                if (n.kind == NodeKind::PlanStep && d == cfg.max_depth && !n.is_leaf) ++violations;
            }
        };
        try {
            for (;;) {
                auto out = o.work_unit();
                if (out.idle) break;
                ++units;
                audit();
            }
            g.check_invariants();
        } catch (const std::exception& e) {
            c.expect(false, std::string("run ") + std::to_string(run) + ": " + e.what() + "; ");
        }

        // Breadth-first expansion and DFS task order, from the event log.
        int last_depth = -1;
        std::vector<NodeId> generated, implemented;
        for (const auto& e : of_type(log, persistence::events::kWorkStarted)) {
            const NodeId target{e.data["target"].get<std::uint64_t>()};
            const auto kind = e.data["kind"].get<std::string>();
            if (kind == "Expand") {
                const int d = oracle_depth(g, target);
                if (d < last_depth) ++order_failures;
                last_depth = d;
            } else if (kind == "GenerateTask") {
                generated.push_back(target);
            } else if (kind == "Implement") {
                const NodeId leaf = *g.node(target).parent;
                if (implemented.empty() || implemented.back() != leaf) implemented.push_back(leaf);
            }
        }
        const auto leaves = oracle_leaves(g);
        if (generated != leaves || implemented != leaves) ++order_failures;
        note_replay(g, log);
    }
    c.expect(violations == 0, std::to_string(violations) + " bound violations; ");
    if (c.ok) c.why << "100 runs, " << units << " units, 0 violations";
    order.expect(order_failures == 0, std::to_string(order_failures) + " ordering failures; ");
    if (order.ok) order.why << "100 runs: expansion depth non-decreasing, task order == DFS leaves";
    return c;
}

// ---------------------------------------------------------------------------

Check criterion_bounded_retries() {
    Check c;
    TempDir tmp("retries");
    GardenConfig cfg;
    cfg.max_code_attempts = 3;
    Garden g(cfg, "retries");
    persistence::EventLog log;
    persistence::BackupStore backups;
    llm::ReplayProvider p;
    p.push(llm::roles::kBroadPlanner,
           "1. Spawn a wandering dog [LEAF: code_generator]\n2. Spawn a barking cat [LEAF: code_generator]\n");
    p.push(llm::roles::kTaskGenerator, "ACTOR: ADog wanders.\nSPAWNER: one dog at the origin.");
    p.push(llm::roles::kTaskGenerator, "ACTOR: ACat barks.\nSPAWNER: one cat at the origin.");
    for (int i = 0; i < 3; ++i) {
        p.push(llm::roles::kCodeGenerator, code_response("ADog"));
        p.push(llm::roles::kCompileEval, "VERDICT: FAIL\nerror C2065: undeclared identifier on line 3.");
    }
    p.push(llm::roles::kCodeGenerator, code_response("ACat"));
    p.push(llm::roles::kLayoutGenerator, layout_response("ACat"));
    p.push(llm::roles::kVisualEval, "VERDICT: PASS\nA cat is visible.", 6);

    engine::MockScenario sc;
    sc.compile_default = engine::MockCompile{false, "error C2065: 'Wander': undeclared identifier"};
    sc.compile = {{false, ""}, {false, ""}, {false, ""}, {true, ""}};
    sc.run_default = engine::MockRun{};
    engine::MockEngine eng(engine::Workspace{tmp.path()}, sc);
    orchestrator::Services s;
    s.provider = &p;
    s.engine = &eng;
    Orchestrator o(g, log, backups, s);
    o.seed("A dog and a cat");
    try {
        o.run_until_idle();
    } catch (const std::exception& e) {
        c.expect(false, std::string("run failed: ") + e.what() + "; ");
        return c;
    }

    const NodeId dog_task = *g.task_of(NodeId{2});
    const NodeId cat_task = *g.task_of(NodeId{3});
    std::vector<std::uint64_t> implements;
    std::uint64_t dog_failed_seq = 0, cat_started_seq = 0;
    int dog_attempts_added = 0;
    for (const auto& e : log.events()) {
        if (e.type == persistence::events::kWorkStarted && e.data["kind"] == "Implement") {
            implements.push_back(e.data["target"].get<std::uint64_t>());
            if (e.data["target"].get<std::uint64_t>() == cat_task.value && !cat_started_seq) cat_started_seq = e.seq;
        }
        if (e.type == persistence::events::kNodeUpdated && e.data["node"]["id"] == dog_task.value &&
            e.data["node"]["status"] == "Failed" && !dog_failed_seq) {
            dog_failed_seq = e.seq;
        }
        if (e.type == persistence::events::kNodeAdded && e.data["node"]["kind"] == "CodeAttempt") {
            const NodeId id{e.data["node"]["id"].get<std::uint64_t>()};
            if (g.owning_task(id) == dog_task) ++dog_attempts_added;
        }
    }
    const std::vector<std::uint64_t> want{dog_task.value, dog_task.value, dog_task.value, cat_task.value};
    c.expect(implements == want, "implement sequence; ");
    c.expect(dog_attempts_added == 3, "dog attempts " + std::to_string(dog_attempts_added) + "; ");
    c.expect(g.node(dog_task).status == NodeStatus::Failed, "dog task not Failed; ");
    c.expect(dog_failed_seq && cat_started_seq && dog_failed_seq < cat_started_seq, "cat did not start after failure; ");
    c.expect(g.node(cat_task).status == NodeStatus::Succeeded, "cat task not Succeeded; ");
    c.expect(eng.compiles().size() == 4, "compile count; ");
    note_replay(g, log);
    if (c.ok) c.why << "3 attempts, task Failed at seq " << dog_failed_seq << ", next task started at seq " << cat_started_seq;
    return c;
}

// ---------------------------------------------------------------------------

Check criterion_cascade() {
    Check c;
    int cases = 0, edits = 0, rejected = 0, deletions = 0, live_restores = 0;
    for (int k = 0; k < 200; ++k) {
        std::mt19937_64 rng(50000 + k);
        TempDir tmp("cascade");
        Garden g(random_config(rng), "case" + std::to_string(k));
        persistence::EventLog log;
        persistence::BackupStore backups;
        llm::ReplayProvider p;
        engine::MockEngine eng(engine::Workspace{tmp.path()}, {});
        orchestrator::Services s;
        s.provider = &p;
        s.engine = &eng;
        Orchestrator o(g, log, backups, s);
        grow_random_garden(o.journal(), rng, std::uniform_int_distribution<std::size_t>(2, 50)(rng));
        c.expect(g.size() <= 50, "garden too large; ");
        ++cases;

        std::optional<std::pair<std::string, Garden>> last;
        const int n_edits = std::uniform_int_distribution<int>(1, 10)(rng);
        for (int i = 0; i < n_edits; ++i) {
            auto edit = random_edit(g, rng);
            if (!edit) break;
            const Garden pre = g;
            const auto seq0 = log.last_seq();
            orchestrator::InvalidationSet inv;
            try {
                inv = o.apply_edit(*edit);
            } catch (const Error&) {
                ++rejected;
                c.expect(g == pre && log.last_seq() == seq0, "rejected edit changed state; ");
                continue;
            }
            ++edits;
            const auto want = oracle_cascade(pre, *edit);
            const std::set<NodeId> removed(inv.removed.begin(), inv.removed.end());
            const std::set<NodeId> modified(inv.modified.begin(), inv.modified.end());
            const std::set<std::string> retracted(inv.retracted.begin(), inv.retracted.end());
            c.expect(removed == want.removed && removed.size() == inv.removed.size(),
                     "removed set differs in case " + std::to_string(k) + "; ");
            c.expect(modified == want.modified, "modified set differs in case " + std::to_string(k) + "; ");
            c.expect(retracted == want.retracted, "retracted set differs in case " + std::to_string(k) + "; ");

            // Every deletion in this edit follows the backup that covers it.
            std::uint64_t backup_seq = 0;
            for (const auto& e : log.since(seq0 + 1)) {
                if (e.type == persistence::events::kBackupCreated) {
                    if (e.data["backup_id"] == *inv.backup_id) backup_seq = e.seq;
                } else if (e.type == persistence::events::kNodeDeleted ||
                           e.type == persistence::events::kAssetRetracted) {
                    ++deletions;
                    c.expect(backup_seq != 0, "deletion without preceding backup; ");
                }
            }
            c.expect(inv.backup_id.has_value(), "no backup id; ");

            Garden restored = g;
            persistence::restore_backup(restored, backups.get(*inv.backup_id));
            c.expect(restored == pre && persistence::save_garden(restored) == persistence::save_garden(pre),
                     "restore mismatch in case " + std::to_string(k) + "; ");
            last.emplace(*inv.backup_id, pre);
        }
        if (last) {
            // The most recent edit is also undone on the live garden, through the log.
            o.restore_backup(last->first);
            ++live_restores;
            c.expect(g == last->second, "live restore mismatch; ");
            bool conflict = false;
            try {
                o.restore_backup(last->first);
            } catch (const Error& e) {
                conflict = e.code() == ErrorCode::ConflictingIds;
            }
            c.expect(conflict, "second restore not rejected; ");
        }
        note_replay(g, log);
    }
    if (c.ok) {
        c.why << cases << " gardens, " << edits << " edits (" << rejected << " rejected), " << deletions
              << " deletions, " << live_restores << " live restores";
    }
    return c;
}

// ---------------------------------------------------------------------------

Check criterion_retrieval() {
    Check c;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto random_vec = [&] {
        assets::Embedding v(32);
        for (auto& x : v) x = normal(rng);
        return v;
    };
    std::vector<assets::Embedding> vecs;
    assets::AssetIndex index(32);
    for (int i = 0; i < 1000; ++i) {
        vecs.push_back(random_vec());
        char id[16];
        std::snprintf(id, sizeof id, "a%04d", i);
        index.add({id, vecs.back(), "file:///" + std::string(id) + ".glb", id});
    }
    // Brute-force oracle in long double: argmax of cosine similarity.
    auto oracle = [&](const assets::Embedding& q) {
        long double best = -2;
        int arg = -1;
        for (int i = 0; i < 1000; ++i) {
            long double dot = 0, nq = 0, nv = 0;
            for (int d = 0; d < 32; ++d) {
                dot += static_cast<long double>(q[d]) * vecs[i][d];
                nq += static_cast<long double>(q[d]) * q[d];
                nv += static_cast<long double>(vecs[i][d]) * vecs[i][d];
            }
            const long double sim = dot / (std::sqrt(nq) * std::sqrt(nv));
            if (sim > best) {
                best = sim;
                arg = i;
            }
        }
        char id[16];
        std::snprintf(id, sizeof id, "a%04d", arg);
        return std::string(id);
    };
    int mismatches = 0, scale_changes = 0;
    for (int qi = 0; qi < 100; ++qi) {
        const auto q = random_vec();
        const auto want = oracle(q);
        const auto got = index.nearest(q).entry->asset_id;
        if (got != want) ++mismatches;
        for (double lambda : {0.5, 2.0, 10.0}) {
            auto scaled = q;
            for (auto& x : scaled) x *= lambda;
            if (index.nearest(scaled).entry->asset_id != got) ++scale_changes;
        }
    }
    c.expect(mismatches == 0, std::to_string(mismatches) + " argmin mismatches; ");
    c.expect(scale_changes == 0, std::to_string(scale_changes) + " scale-dependent results; ");
    if (c.ok) c.why << "100/100 queries equal brute force, 300 scaled queries unchanged";
    return c;
}

// ---------------------------------------------------------------------------

Check criterion_screenshots() {
    Check c;
    // A task that walks through every run outcome before passing.
    TempDir tmp("shots");
    GardenConfig cfg;
    cfg.max_code_attempts = 4;
    Garden g(cfg, "shots");
    persistence::EventLog log;
    persistence::BackupStore backups;
    llm::ReplayProvider p;
    p.push(llm::roles::kBroadPlanner, "1. A spinning windmill [LEAF: code_generator]\n");
    p.push(llm::roles::kTaskGenerator, "ACTOR: AWindmill spins.\nSPAWNER: one windmill.");
    for (int i = 0; i < 4; ++i) {
        p.push(llm::roles::kCodeGenerator, code_response("AWindmill"));
        p.push(llm::roles::kLayoutGenerator, layout_response("AWindmill"));
    }
    p.push(llm::roles::kPlacementEval, "VERDICT: FAIL\nThe placement script referenced a missing class.");
    p.push(llm::roles::kCrashEval, "VERDICT: FAIL\nNull dereference in Tick.");
    p.push(llm::roles::kVisualEval, "VERDICT: FAIL\nBlades do not turn.", 6);
    p.push(llm::roles::kVisualEval, "VERDICT: PASS\nBlades turn.", 6);
    engine::MockScenario sc;
    sc.compile_default = engine::MockCompile{};
    engine::MockRun crash;
    crash.outcome = engine::RunOutcome::Crashed;
    crash.crash_log = "Fatal error: access violation in AWindmill::Tick";
    engine::MockRun placement;
    placement.outcome = engine::RunOutcome::PlacementError;
    sc.run = {placement, crash, engine::MockRun{}, engine::MockRun{}};
    engine::MockEngine eng(engine::Workspace{tmp.path()}, sc);
    orchestrator::Services s;
    s.provider = &p;
    s.engine = &eng;
    Orchestrator o(g, log, backups, s);
    o.seed("windmill");
    o.run_until_idle();
    c.expect(g.node(*g.task_of(NodeId{2})).status == NodeStatus::Succeeded, "windmill task not Succeeded; ");
    audit_screenshots(g, tmp.path(), p);
    note_replay(g, log);

    // Direct engine runs.
    TempDir direct("shots-direct");
    engine::MockScenario ok;
    ok.compile_default = engine::MockCompile{};
    ok.run_default = engine::MockRun{};
    engine::MockEngine e2(engine::Workspace{direct.path()}, ok);
    CodeBundle bundle;
    bundle.files["A.h"] = "class AProbe : public AActor {};";
    e2.compile_project(bundle, "task-1");
    for (int i = 1; i <= 50; ++i) {
        auto r = e2.run_simulation(codegen::default_layout("AProbe"), {"task-1", i});
        ++screenshot_runs;
        bool good = r.outcome == engine::RunOutcome::Ran && r.screenshots.size() == 6;
        for (const auto& f : r.screenshots) good = good && std::filesystem::exists(f);
        if (!good) ++screenshot_failures;
    }

    c.expect(screenshot_failures == 0, std::to_string(screenshot_failures) + " runs with wrong screenshot count; ");
    c.expect(visual_failures == 0, std::to_string(visual_failures) + " requests with wrong image count; ");
    c.expect(visual_requests > 0, "no visual requests observed; ");
    if (c.ok) c.why << screenshot_runs << " Ran outcomes with 6 screenshots, " << visual_requests << " visual requests with 6 images";
    return c;
}

// ---------------------------------------------------------------------------

Check criterion_layouts() {
    Check c;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coord(-1e6, 1e6);
    std::uniform_real_distribution<double> pos_scale(1e-6, 1e3);
    std::uniform_int_distribution<int> small(0, 6);
    const std::vector<std::string> names{"ASheep", "AFence", "A_Tree_01", "AWaterfall", "ASpawnerÜ"};
    const std::vector<std::string> texts{"", "plain", "quote \" and backslash \\", "tab\tnewline\n", "ünïcødé ✓",
                                         "{\"json\": [1,2]}"};
    int failures = 0;
    for (int i = 0; i < 500; ++i) {
        LayoutSpec spec;
        const int actors = small(rng) + (i % 3 == 0 ? 0 : 1);
        for (int a = 0; a < actors; ++a) {
            ActorPlacement p;
            p.class_name = names[rng() % names.size()];
            for (int d = 0; d < 3; ++d) {
                p.position[d] = rng() % 4 == 0 ? std::round(coord(rng)) : coord(rng);
                p.rotation[d] = std::uniform_real_distribution<double>(-360, 360)(rng);
                p.scale[d] = pos_scale(rng);
            }
            if (rng() % 5 == 0) p.position[0] = -0.0;
            const int props = small(rng);
            for (int k = 0; k < props; ++k) {
                const std::string key = "prop_" + std::to_string(rng() % 50);
                switch (rng() % 4) {
                    case 0: p.properties[key] = static_cast<bool>(rng() % 2); break;
                    case 1: p.properties[key] = static_cast<std::int64_t>(rng()); break;
                    case 2: p.properties[key] = coord(rng) * std::pow(10.0, static_cast<double>(rng() % 40) - 20); break;
                    default: p.properties[key] = texts[rng() % texts.size()]; break;
                }
            }
            spec.actors.push_back(std::move(p));
        }
        const auto first = codegen::serialize_layout(spec);
        const auto parsed = codegen::parse_layout_document(first);
        const auto second = codegen::serialize_layout(parsed);
        if (first != second || !(parsed == spec)) ++failures;
    }
    c.expect(failures == 0, std::to_string(failures) + " layouts changed on round trip; ");
    if (c.ok) c.why << "500/500 bit-exact";
    return c;
}

void report(int n, const char* title, const Check& c, int& failed) {
    std::cout << (c.ok ? "PASS" : "FAIL") << "  [" << n << "] " << title << ": " << c.why.str() << std::endl;
    if (!c.ok) ++failed;
}

Check guarded(Check (*fn)()) {
    try {
        return fn();
    } catch (const std::exception& e) {
        Check c;
        c.expect(false, std::string("exception: ") + e.what());
        return c;
    }
}

}  // namespace

int main() {
    int failed = 0;
    report(1, "sheep scenario grows to the fixture garden in Play mode", guarded(criterion_sheep), failed);
    Check order;
    Check bounds;
    try {
        bounds = criterion_bounds_and_order(order);
    } catch (const std::exception& e) {
        bounds.expect(false, e.what());
        order.expect(false, e.what());
    }
    report(2, "max_depth and max_branching hold under over-producing scripts", bounds, failed);
    report(3, "failing compilation stops after max_code_attempts and moves on", guarded(criterion_bounded_retries), failed);
    report(4, "cascade invalidation equals the brute-force oracle; backups precede deletions; restore is exact",
           guarded(criterion_cascade), failed);
    report(5, "expansion is breadth-first and tasks run in DFS leaf order", order, failed);
    report(6, "nearest-asset lookup equals brute-force cosine argmin and is scale invariant", guarded(criterion_retrieval),
           failed);
    report(7, "every Ran outcome yields 6 screenshots and visual requests carry 6 images",
           guarded(criterion_screenshots), failed);
    Check replay;
    replay.expect(replay_failures == 0, std::to_string(replay_failures) + " of " + std::to_string(replay_checks) +
                                            " replays differ from the live garden");
    if (replay.ok) replay.why << replay_checks << " replays byte-identical to the live save";
    report(8, "replaying the event log reproduces the live canonical save", replay, failed);
    report(9, "layout documents round-trip bit-exactly", guarded(criterion_layouts), failed);
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << (9 - failed) << "/9" << std::endl;
    return failed ? 1 : 0;
}
