// gardenctl: command-line front end for a garden workspace.
//
//   gardenctl init <workspace> [--config file]
//   gardenctl --workspace W seed "<text>"
//   gardenctl --workspace W step [n]
//   gardenctl --workspace W play | pause | status
//   gardenctl --workspace W export <file>
//   gardenctl index build <manifest> [--out file] [--dim n]
//   gardenctl --workspace W serve [--port n]

#include <CLI11.hpp>

#include <iostream>

#include "garden/api/server.hpp"
#include "garden/api/session.hpp"
#include "garden/api/view.hpp"
#include "garden/assets/asset_index.hpp"
#include "garden/error.hpp"
#include "garden/persistence/codec.hpp"
#include "garden/util/fs.hpp"

namespace {

using namespace garden;
namespace fsys = std::filesystem;

constexpr const char* kConfigFile = "config.json";

api::AppConfig load_config(const fsys::path& workspace, const std::string& override_file) {
    if (!override_file.empty()) return api::AppConfig::load(override_file);
    if (fsys::exists(workspace / kConfigFile)) return api::AppConfig::load(workspace / kConfigFile);
    return api::AppConfig{};
}

std::unique_ptr<api::GardenSession> open_garden(const fsys::path& workspace, const std::string& garden_id,
                                                const api::AppConfig& cfg) {
    const auto dir = workspace / garden_id;
    if (!api::GardenSession::exists(dir)) return api::GardenSession::create(dir, garden_id, cfg);
    return api::GardenSession::open(dir, cfg);
}

void print_tree(const Garden& g, NodeId id, int indent, std::ostream& out) {
    const auto& n = g.node(id);
    std::string text = n.text.substr(0, n.text.find('\n'));
    if (text.size() > 72) text = text.substr(0, 69) + "...";
    out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << "[" << n.id.value << "] " << to_string(n.kind)
        << " " << to_string(n.status);
    if (n.is_leaf) out << " leaf";
    if (n.assigned_submodule) out << " (" << *n.assigned_submodule << ")";
    out << ": " << text << "\n";
    for (auto c : g.children(id)) print_tree(g, c, indent + 1, out);
}

void print_status(const Garden& g, std::ostream& out) {
    out << "garden " << g.id() << "  mode " << to_string(g.mode()) << "  nodes " << g.size() << "\n";
    if (!g.root()) {
        out << "(no seed)\n";
        return;
    }
    print_tree(g, *g.root(), 0, out);
    out << "leaves:";
    for (auto id : g.ordered_leaves()) out << " " << id.value;
    out << "\nfrontier:";
    for (const auto& item : g.compute_frontier()) out << " " << to_string(item.kind) << "@" << item.node.value;
    out << "\nassets: " << g.assets().records().size() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grow and steer a garden from a seed prompt"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string workspace = ".";
    std::string config_file;
    std::string garden_id = "default";
    int port = 8080;
    app.add_option("--workspace,-w", workspace, "Workspace directory");
    app.add_option("--config,-c", config_file, "Service configuration file");
    app.add_option("--garden,-g", garden_id, "Garden id inside the workspace");
    app.add_option("--port,-p", port, "Port for serve");

    auto* init = app.add_subcommand("init", "Create a workspace and an empty garden");
    std::string init_dir;
    init->add_option("workspace", init_dir, "Workspace directory");

    auto* seed = app.add_subcommand("seed", "Plant the seed prompt");
    std::string seed_text;
    seed->add_option("text", seed_text, "Seed text")->required();

    auto* step = app.add_subcommand("step", "Perform n units of work");
    int step_count = 1;
    step->add_option("n", step_count, "Number of units")->check(CLI::PositiveNumber);

    auto* play = app.add_subcommand("play", "Work until the frontier is empty");
    auto* pause = app.add_subcommand("pause", "Pause the garden");
    auto* status = app.add_subcommand("status", "Print the garden tree");
    auto* exportc = app.add_subcommand("export", "Write the canonical garden document");
    std::string export_path;
    exportc->add_option("path", export_path, "Output file")->required();

    auto* index = app.add_subcommand("index", "Asset index tools");
    index->require_subcommand(1);
    auto* build = index->add_subcommand("build", "Embed a thumbnail manifest into an index");
    std::string manifest;
    std::string index_out;
    std::size_t dim = 32;
    build->add_option("manifest", manifest, "Manifest (JSON lines)")->required()->check(CLI::ExistingFile);
    build->add_option("--out,-o", index_out, "Index file (default: index.json next to the manifest)");
    build->add_option("--dim", dim, "Embedding dimension for the hashing embedder");

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--port,-p", port, "Port");

    CLI11_PARSE(app, argc, argv);

    std::unique_ptr<api::GardenSession> session;
    // Persist progress (and the replay cursor) even when a command fails midway.
    auto save_quietly = [&] {
        if (!session) return;
        try {
            session->save();
        } catch (const std::exception&) {
        }
    };
    try {
        if (*init) {
            fsys::path ws = init_dir.empty() ? fsys::path(workspace) : fsys::path(init_dir);
            fsys::create_directories(ws);
            auto cfg = config_file.empty() ? api::AppConfig{} : api::AppConfig::load(config_file);
            fs::write_file(ws / kConfigFile, cfg.to_json().dump(2) + "\n");
            api::GardenSession::create(ws / garden_id, garden_id, cfg);
            std::cout << "initialized " << (ws / garden_id).string() << "\n";
            return 0;
        }
        if (*build) {
            assets::HashingEmbedder embedder(dim);
            fsys::path out = index_out.empty() ? fsys::path(manifest).parent_path() / "index.json" : fsys::path(index_out);
            auto idx = assets::build_index(manifest, embedder, fsys::absolute(out).parent_path());
            idx.save(out);
            std::cout << "indexed " << idx.entries().size() << " assets into " << out.string() << "\n";
            return 0;
        }

        const fsys::path ws(workspace);
        auto cfg = load_config(ws, config_file);
        if (*serve) {
            api::ApiServer server(ws, cfg);
            int bound = server.bind("0.0.0.0", port);
            std::cout << "listening on port " << bound << std::endl;
            server.listen();
            return 0;
        }

        session = open_garden(ws, garden_id, cfg);
        auto& orch = session->orchestrator();
        if (*seed) {
            auto id = orch.seed(seed_text);
            std::cout << "seed " << id.value << "\n";
        } else if (*step) {
            if (orch.garden().mode() == Mode::Paused) orch.set_mode(Mode::Step);
            for (int i = 0; i < step_count; ++i) {
                auto out = orch.step();
                if (out.idle) {
                    std::cout << "idle\n";
                    break;
                }
                std::cout << to_string(out.item->kind) << " " << out.item->node.value << ": " << out.result << "\n";
                session->save();
            }
        } else if (*play) {
            orch.set_mode(Mode::Play);
            auto units = orch.run_until_idle();
            std::cout << units << " units\n";
        } else if (*pause) {
            orch.set_mode(Mode::Paused);
        } else if (*status) {
            print_status(orch.garden(), std::cout);
        } else if (*exportc) {
            fs::write_file(export_path, persistence::save_garden(orch.garden()));
        }
        session->save();
    } catch (const Error& e) {
        save_quietly();
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        save_quietly();
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
