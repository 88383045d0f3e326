#include "garden/orchestrator/orchestrator.hpp"

#include <algorithm>
#include <set>

#include "garden/codegen/layout.hpp"
#include "garden/error.hpp"
#include "garden/util/fs.hpp"
#include "garden/util/text.hpp"

namespace garden::orchestrator {

using persistence::Actor;
using persistence::Json;
namespace events = persistence::events;

namespace {

llm::LlmProvider& require_provider(const Services& s) {
    if (!s.provider) fail(ErrorCode::InvalidConfig, "orchestrator needs an LLM provider");
    return *s.provider;
}

engine::EngineAdapter& require_engine(const Services& s) {
    if (!s.engine) fail(ErrorCode::InvalidConfig, "orchestrator needs an engine adapter");
    return *s.engine;
}

Json ids_json(const std::vector<NodeId>& ids) {
    auto arr = Json::array();
    for (auto id : ids) arr.push_back(id.value);
    return arr;
}

std::string task_title(const TaskSpec& spec) {
    for (const char* key : {"actor", "description"}) {
        auto it = spec.prompt_parts.find(key);
        if (it != spec.prompt_parts.end()) return text::excerpt(text::trim(it->second), 160);
    }
    return text::excerpt(text::trim(spec.full_prompt()), 160);
}

}  // namespace

Orchestrator::Orchestrator(Garden& garden, persistence::EventLog& log, persistence::BackupStore& backups,
                           Services services)
    : garden_(garden),
      log_(log),
      backups_(backups),
      journal_(garden, log),
      services_(services),
      provider_(require_provider(services), log),
      engine_(require_engine(services), log),
      registrar_(journal_, services.engine->workspace().root),
      planner_(provider_),
      pipeline_(provider_, engine_) {
    if (log_.last_seq() == 0) journal_.record_created();
}

std::string Orchestrator::task_key(NodeId task) { return "task-" + to_string(task); }

NodeId Orchestrator::seed(std::string_view text) {
    if (garden_.root()) fail(ErrorCode::SeedAlreadyExists, "garden already has a seed");
    return journal_.add_seed(text, Actor::User);
}

void Orchestrator::set_status(NodeId id, NodeStatus status) {
    GardenNode n = garden_.node(id);
    if (n.status == status) return;
    n.status = status;
    journal_.update(n);
}

void Orchestrator::set_mode(Mode mode, Actor actor) {
    if (garden_.mode() == mode) return;
    journal_.set_mode(mode, actor);
}

StepOutcome Orchestrator::step() {
    if (garden_.mode() == Mode::Paused) fail(ErrorCode::PreconditionViolation, "garden is paused");
    return work_unit();
}

std::size_t Orchestrator::run_until_idle(std::size_t max_units) {
    std::size_t n = 0;
    while (n < max_units) {
        if (work_unit().idle) break;
        ++n;
    }
    return n;
}

StepOutcome Orchestrator::work_unit() {
    auto frontier = garden_.compute_frontier();
    if (frontier.empty()) return {true, std::nullopt, "idle"};
    const auto item = frontier.front();
    journal_.work_started(item);
    std::string result;
    try {
        switch (item.kind) {
            case FrontierKind::Expand: result = expand(item.node); break;
            case FrontierKind::GenerateTask: result = generate_task(item.node); break;
            case FrontierKind::Implement: result = implement(item.node); break;
        }
    } catch (const Error& e) {
        journal_.work_finished(item, std::string("error: ") + e.what());
        throw;
    }
    journal_.work_finished(item, result);
    return {false, item, result};
}

std::string Orchestrator::expand(NodeId id) {
    planner::ExpansionResult expansion;
    try {
        expansion = planner_.expand_plan_node(garden_, id);
    } catch (const Error& e) {
        if (is_script_error(e.code())) throw;
        GardenNode n = garden_.node(id);
        n.status = NodeStatus::Failed;
        n.payload = PlanDetail{"", e.what()};
        journal_.update(n);
        return std::string("failed: ") + e.what();
    }
    for (const auto& child : expansion.children) {
        journal_.add_child(id, NodeKind::PlanStep, child.text, child.is_leaf(), child.submodule, std::monostate{});
    }
    GardenNode n = garden_.node(id);
    n.status = NodeStatus::Succeeded;
    n.payload = PlanDetail{expansion.detail, ""};
    if (expansion.truncated > 0) {
        n.text += " (" + std::to_string(expansion.truncated) + " further steps dropped by the branching limit)";
    }
    journal_.update(n);
    return "ok";
}

std::string Orchestrator::generate_task(NodeId leaf) {
    TaskSpec spec;
    try {
        spec = planner_.generate_task(garden_, leaf);
    } catch (const Error& e) {
        if (is_script_error(e.code())) throw;
        GardenNode n = garden_.node(leaf);
        n.status = NodeStatus::Failed;
        n.payload = PlanDetail{"", e.what()};
        journal_.update(n);
        return std::string("failed: ") + e.what();
    }
    GardenNode n = garden_.node(leaf);
    n.assigned_submodule = spec.submodule;
    n.status = NodeStatus::Succeeded;
    journal_.update(n);
    journal_.add_child(leaf, NodeKind::Task, task_title(spec), false, std::nullopt, spec);
    return "ok";
}

std::string Orchestrator::implement(NodeId task) {
    const auto* spec = std::get_if<TaskSpec>(&garden_.node(task).payload);
    if (!spec) fail(ErrorCode::KindViolation, "task " + to_string(task) + " has no task spec");
    const auto* desc = garden_.config().find_submodule(spec->submodule);
    if (!desc) {
        set_status(task, NodeStatus::Failed);
        return "failed: unknown submodule " + spec->submodule;
    }
    const TaskSpec copy = *spec;
    switch (desc->executor) {
        case Executor::CodeGenerator: return run_code_attempt(task, copy, false);
        case Executor::ProceduralMesh: return run_code_attempt(task, copy, true);
        case Executor::DiffusionMesh:
        case Executor::MeshDownloader: return run_asset_task(task, copy, desc->executor);
    }
    return "ok";
}

std::string Orchestrator::run_code_attempt(NodeId task, const TaskSpec& spec, bool procedural) {
    const int max_attempts = garden_.config().max_code_attempts;
    // Attempts count from the last user-edited evaluation, which grants a fresh budget.
    int used = 0;
    std::optional<NodeId> last_attempt, last_eval;
    const auto chain = garden_.chain_of(task);
    for (auto id : chain) {
        const auto& n = garden_.node(id);
        if (n.kind == NodeKind::CodeAttempt) {
            ++used;
            last_attempt = id;
            last_eval.reset();
        } else if (n.kind == NodeKind::Evaluation) {
            last_eval = id;
            const auto* r = std::get_if<EvaluationReport>(&n.payload);
            if (r && r->user_edited) used = 0;
        }
    }
    if (used >= max_attempts) {
        set_status(task, NodeStatus::Failed);
        return "failed: attempt budget exhausted";
    }
    set_status(task, NodeStatus::InProgress);

    codegen::AttemptInput input;
    input.task = spec;
    input.task_key = task_key(task);
    input.index = used + 1;
    input.context.starter_content = garden_.config().starter_content;
    input.context.assets = garden_.assets().records();
    if (last_attempt) {
        const auto* prev = std::get_if<PipelineAttempt>(&garden_.node(*last_attempt).payload);
        codegen::PriorAttempt prior;
        if (prev) {
            prior.index = prev->index;
            prior.bundle = prev->bundle;
            prior.layout = prev->layout;
            prior.feedback = prev->feedback;
        }
        if (last_eval) {
            if (const auto* r = std::get_if<EvaluationReport>(&garden_.node(*last_eval).payload)) {
                prior.feedback = r->feedback;
                prior.source_stage = r->source_stage;
            }
        }
        input.prior = std::move(prior);
    }

    auto result = pipeline_.run_attempt(input, procedural);
    const bool passed = result.evaluation.verdict == Verdict::Pass;
    const NodeId parent = chain.empty() ? task : chain.back();
    const auto attempt_text = "Attempt " + std::to_string(input.index) + ": reached " +
                              std::string(to_string(result.attempt.stage_reached));
    const auto attempt_id = journal_.add_child(parent, NodeKind::CodeAttempt, attempt_text, false, std::nullopt,
                                               result.attempt);
    set_status(attempt_id, passed ? NodeStatus::Succeeded : NodeStatus::Failed);
    const auto eval_text = std::string(to_string(result.evaluation.verdict)) + " (" +
                           std::string(to_string(result.evaluation.source_stage)) + "): " +
                           text::excerpt(text::trim(result.evaluation.feedback), 200);
    const auto eval_id = journal_.add_child(attempt_id, NodeKind::Evaluation, eval_text, false, std::nullopt,
                                            result.evaluation);
    set_status(eval_id, passed ? NodeStatus::Succeeded : NodeStatus::Failed);

    if (passed) {
        if (procedural) {
            auto classes = engine::declared_actor_classes(result.attempt.bundle);
            std::string header;
            for (const auto& [path, src] : result.attempt.bundle.files) {
                if (path.size() > 2 && path.compare(path.size() - 2, 2, ".h") == 0) {
                    header = path;
                    break;
                }
            }
            if (!classes.empty() && !header.empty()) {
                AssetRecord record;
                record.asset_id = "procedural-" + to_string(attempt_id);
                record.display_name = classes.front();
                record.mesh_path = "source/" + task_key(task) + "/" + header;
                record.origin = AssetOrigin::Procedural;
                record.origin_node = attempt_id;
                registrar_.register_asset(record);
            }
        }
        set_status(task, NodeStatus::Succeeded);
        return "ok: attempt " + std::to_string(input.index) + " passed";
    }
    if (input.index >= max_attempts) {
        set_status(task, NodeStatus::Failed);
        return "failed: " + std::to_string(max_attempts) + " attempts exhausted";
    }
    return "retry: attempt " + std::to_string(input.index) + " failed at " +
           std::string(to_string(result.evaluation.source_stage));
}

std::string Orchestrator::run_asset_task(NodeId task, const TaskSpec& spec, Executor executor) {
    set_status(task, NodeStatus::InProgress);
    const auto artifact_id = journal_.add_child(task, NodeKind::AssetArtifact, "Asset", false, std::nullopt,
                                                AssetArtifact{});
    set_status(artifact_id, NodeStatus::InProgress);
    auto it = spec.prompt_parts.find("description");
    const std::string description = it != spec.prompt_parts.end() ? it->second : spec.full_prompt();
    const std::string display = text::excerpt(text::trim(garden_.node(*garden_.node(task).parent).text), 60);

    AssetArtifact artifact;
    bool ok = false;
    try {
        AssetRecord record;
        if (executor == Executor::MeshDownloader) {
            if (!services_.embedder || !services_.index || !services_.source) {
                throw assets::AdapterStageError("retrieval", "no asset index configured");
            }
            record = assets::retrieve_nearest_asset(description, *services_.index,
                                                    {*services_.embedder, *services_.source, engine_, registrar_},
                                                    artifact_id);
        } else {
            if (!services_.text_to_image || !services_.image_to_mesh) {
                throw assets::AdapterStageError(assets::kStageTextToImage, "no mesh generation adapters configured");
            }
            record = assets::generate_mesh_chain(description, "mesh-" + to_string(artifact_id), display,
                                                 {*services_.text_to_image, *services_.image_to_mesh, engine_,
                                                  registrar_},
                                                 artifact_id);
        }
        artifact.asset_id = record.asset_id;
        artifact.message = record.display_name + " -> " + record.mesh_path;
        ok = true;
    } catch (const assets::AdapterStageError& e) {
        artifact.stage = e.stage();
        artifact.message = e.what();
    } catch (const Error& e) {
        if (is_script_error(e.code())) throw;
        artifact.stage = executor == Executor::MeshDownloader ? "retrieval" : "generation";
        artifact.message = e.what();
    }
    GardenNode n = garden_.node(artifact_id);
    n.payload = artifact;
    n.text = ok ? "Asset " + *artifact.asset_id : "Asset failed at " + artifact.stage;
    n.status = ok ? NodeStatus::Succeeded : NodeStatus::Failed;
    journal_.update(n);
    set_status(task, ok ? NodeStatus::Succeeded : NodeStatus::Failed);
    return ok ? "ok: " + *artifact.asset_id : "failed: " + artifact.message;
}

InvalidationSet Orchestrator::apply_edit(const UserEdit& edit) {
    InvalidationSet out;
    out.reason = std::string(to_string(edit.kind));
    if (edit.kind == EditKind::SetMode) {
        if (!edit.mode) fail(ErrorCode::InvalidTarget, "SetMode needs a mode");
        set_mode(*edit.mode, Actor::User);
        return out;
    }
    if (edit.kind == EditKind::CompileAndRunAt) {
        if (!edit.target) fail(ErrorCode::InvalidTarget, "CompileAndRunAt needs a target");
        compile_and_run_at(*edit.target);
        return out;
    }

    const auto plan = plan_edit(garden_, edit);
    persistence::BackupBundle bundle;
    bundle.edit = edit.to_json();
    for (auto id : plan.removed) bundle.removed.push_back(garden_.node(id));
    for (const auto& u : plan.updates) bundle.modified.push_back(garden_.node(u.id));
    std::vector<std::pair<std::size_t, std::string>> positions;
    for (const auto& asset_id : plan.retracted) positions.emplace_back(*garden_.assets().position(asset_id), asset_id);
    std::sort(positions.begin(), positions.end());
    for (const auto& [pos, asset_id] : positions) {
        bundle.assets.push_back(*garden_.assets().find(asset_id));
        bundle.asset_positions.push_back(pos);
    }
    const auto& stored = backups_.create(std::move(bundle));
    out.backup_id = stored.backup_id;
    journal_.audit(events::kBackupCreated,
                   Json{{"backup_id", stored.backup_id},
                        {"edit", stored.edit},
                        {"removed", ids_json(plan.removed)},
                        {"modified", [&] {
                             auto arr = Json::array();
                             for (const auto& u : plan.updates) arr.push_back(u.id.value);
                             return arr;
                         }()},
                        {"assets", plan.retracted}},
                   Actor::User);

    for (const auto& asset_id : plan.retracted) journal_.retract_asset(asset_id, Actor::User);
    for (auto it = plan.removed.rbegin(); it != plan.removed.rend(); ++it) journal_.erase(*it, Actor::User);
    for (const auto& u : plan.updates) journal_.update(u, Actor::User);

    out.removed = plan.removed;
    for (const auto& u : plan.updates) out.modified.push_back(u.id);
    out.retracted = plan.retracted;
    journal_.audit(events::kEditApplied,
                   Json{{"edit", edit.to_json()}, {"backup_id", stored.backup_id}, {"removed", ids_json(out.removed)}},
                   Actor::User);
    return out;
}

void Orchestrator::restore_backup(const std::string& backup_id) {
    const auto& bundle = backups_.get(backup_id);
    for (const auto& e : log_.events()) {
        if (e.type == events::kBackupRestored && e.data.value("backup_id", std::string()) == backup_id) {
            fail(ErrorCode::ConflictingIds, "backup " + backup_id + " was already restored");
        }
    }
    // Dry run on a copy so a conflict leaves the live garden and log untouched.
    Garden scratch = garden_;
    persistence::restore_backup(scratch, bundle);

    for (const auto& n : bundle.modified) journal_.update(n, Actor::User);
    for (const auto& n : bundle.removed) journal_.insert(n, Actor::User);
    for (std::size_t i = 0; i < bundle.assets.size(); ++i) {
        journal_.register_asset_at(bundle.asset_positions[i], bundle.assets[i], Actor::User);
    }
    journal_.audit(events::kBackupRestored, Json{{"backup_id", backup_id}}, Actor::User);
}

engine::SessionHandle Orchestrator::compile_and_run_at(NodeId id) {
    const GardenNode* n = &garden_.node(id);
    if (n->kind == NodeKind::Evaluation && n->parent) n = &garden_.node(*n->parent);
    const auto* attempt = std::get_if<PipelineAttempt>(&n->payload);
    if (n->kind != NodeKind::CodeAttempt || !attempt || !attempt->compiled || !attempt->layout) {
        fail(ErrorCode::SnapshotMissing, "node " + to_string(id) + " has no compiled code and layout snapshot");
    }
    auto task = garden_.owning_task(n->id);
    if (!task) fail(ErrorCode::SnapshotMissing, "attempt outside a task");

    const auto& ws = engine_.workspace();
    std::string name = task_key(*task) + "_attempt" + std::to_string(attempt->index);
    auto dir = ws.sessions_dir() / name;
    for (int k = 2; std::filesystem::exists(dir); ++k) dir = ws.sessions_dir() / (name + "_" + std::to_string(k));
    const auto source_dir = dir / "source";
    for (const auto& [path, src] : attempt->bundle.files) fs::write_file(source_dir / path, src);
    const auto layout_file = dir / "layout.json";
    fs::write_file(layout_file, codegen::serialize_layout(*attempt->layout));

    // Read back and compare with the stored fingerprint.
    CodeBundle check;
    check.summary = attempt->bundle.summary;
    for (const auto& [path, src] : attempt->bundle.files) check.files[path] = fs::read_file(source_dir / path);
    if (check.content_hash() != attempt->content_hash) {
        fail(ErrorCode::CorruptDocument, "materialized snapshot does not match its content hash");
    }
    if (!engine_.isolates_processes() && garden_.mode() != Mode::Paused) set_mode(Mode::Paused, Actor::System);
    return engine_.launch_user_session(source_dir, layout_file);
}

}  // namespace garden::orchestrator
