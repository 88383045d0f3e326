#include "garden/persistence/journal.hpp"

#include <cstring>

#include "garden/error.hpp"

namespace garden::persistence {

namespace {

bool is(const GardenEvent& e, const char* type) { return e.type == type; }

}  // namespace

void apply_event(Garden& g, const GardenEvent& e) {
    decode("event " + std::to_string(e.seq), [&] {
        const auto& d = e.data;
        if (is(e, events::kNodeAdded)) {
            g.insert_node(node_from_json(d.at("node")));
        } else if (is(e, events::kNodeUpdated)) {
            g.update_node(node_from_json(d.at("node")));
        } else if (is(e, events::kNodeDeleted)) {
            g.erase_node(NodeId{d.at("id").get<std::uint64_t>()});
        } else if (is(e, events::kModeChanged)) {
            auto mode = mode_from(d.at("mode").get<std::string>());
            if (!mode) fail(ErrorCode::CorruptDocument, "unknown mode in event " + std::to_string(e.seq));
            g.set_mode(*mode);
        } else if (is(e, events::kAssetRegistered)) {
            g.assets().insert_at(d.at("position").get<std::size_t>(), asset_from_json(d.at("asset")));
        } else if (is(e, events::kAssetRetracted)) {
            g.assets().remove(d.at("asset_id").get<std::string>());
        } else if (is(e, events::kWorkStarted)) {
            g.set_active(NodeId{d.at("target").get<std::uint64_t>()});
        } else if (is(e, events::kWorkFinished)) {
            g.set_active(std::nullopt);
        } else if (is(e, events::kGardenCreated)) {
            fail(ErrorCode::CorruptDocument, "GardenCreated after the first event");
        }
        return 0;
    });
}

Garden replay_events(const std::vector<GardenEvent>& log, std::optional<std::uint64_t> upto) {
    if (log.empty() || log.front().type != events::kGardenCreated) {
        fail(ErrorCode::CorruptDocument, "event log does not start with GardenCreated");
    }
    const auto& first = log.front();
    if (first.seq != 1) fail(ErrorCode::SequenceGap, "log starts at seq " + std::to_string(first.seq));
    Garden g = decode("GardenCreated", [&] {
        return Garden(config_from_json(first.data.at("config")), first.data.at("garden_id").get<std::string>());
    });
    for (std::size_t i = 1; i < log.size(); ++i) {
        if (upto && log[i - 1].seq >= *upto) break;
        if (log[i].seq != log[i - 1].seq + 1) {
            fail(ErrorCode::SequenceGap, "seq " + std::to_string(log[i].seq) + " follows " +
                                             std::to_string(log[i - 1].seq));
        }
        apply_event(g, log[i]);
    }
    return g;
}

void Journal::record_created() {
    log_.append(Actor::System, events::kGardenCreated,
                Json{{"garden_id", garden_.id()}, {"config", to_json(garden_.config())}});
}

NodeId Journal::add_seed(std::string_view text, Actor actor) {
    auto id = garden_.add_seed(text);
    log_.append(actor, events::kNodeAdded, Json{{"node", to_json(garden_.node(id))}});
    return id;
}

NodeId Journal::add_child(NodeId parent, NodeKind kind, std::string_view text, bool is_leaf,
                          std::optional<std::string> submodule, Payload payload, Actor actor) {
    auto id = garden_.add_child(parent, kind, text, is_leaf, std::move(submodule), std::move(payload));
    log_.append(actor, events::kNodeAdded, Json{{"node", to_json(garden_.node(id))}});
    return id;
}

void Journal::update(const GardenNode& node, Actor actor) {
    garden_.update_node(node);
    log_.append(actor, events::kNodeUpdated, Json{{"node", to_json(garden_.node(node.id))}});
}

void Journal::erase(NodeId id, Actor actor) {
    garden_.erase_node(id);
    log_.append(actor, events::kNodeDeleted, Json{{"id", id.value}});
}

void Journal::insert(const GardenNode& node, Actor actor) {
    garden_.insert_node(node);
    log_.append(actor, events::kNodeAdded, Json{{"node", to_json(node)}});
}

void Journal::set_mode(Mode mode, Actor actor) {
    garden_.set_mode(mode);
    log_.append(actor, events::kModeChanged, Json{{"mode", to_string(mode)}});
}

void Journal::register_asset(const AssetRecord& record, Actor actor) {
    register_asset_at(garden_.assets().records().size(), record, actor);
}

void Journal::register_asset_at(std::size_t position, const AssetRecord& record, Actor actor) {
    garden_.assets().insert_at(position, record);
    log_.append(actor, events::kAssetRegistered,
                Json{{"asset", to_json(record)}, {"position", *garden_.assets().position(record.asset_id)}});
}

AssetRecord Journal::retract_asset(const std::string& asset_id, Actor actor) {
    auto record = garden_.assets().remove(asset_id);
    log_.append(actor, events::kAssetRetracted, Json{{"asset_id", asset_id}});
    return record;
}

void Journal::work_started(const FrontierItem& item) {
    garden_.set_active(item.node);
    log_.append(Actor::System, events::kWorkStarted,
                Json{{"kind", to_string(item.kind)}, {"target", item.node.value}});
}

void Journal::work_finished(const FrontierItem& item, std::string_view outcome) {
    garden_.set_active(std::nullopt);
    log_.append(Actor::System, events::kWorkFinished,
                Json{{"kind", to_string(item.kind)}, {"target", item.node.value}, {"outcome", outcome}});
}

GardenEvent Journal::audit(const char* type, Json data, Actor actor) { return log_.append(actor, type, std::move(data)); }

}  // namespace garden::persistence
