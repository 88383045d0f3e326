#include <doctest.h>

#include <cmath>
#include <thread>

#include <httplib.h>

#include "garden/assets/asset_index.hpp"
#include "garden/assets/mesh_chain.hpp"
#include "garden/assets/retrieval.hpp"
#include "garden/engine/mock_engine.hpp"
#include "garden/error.hpp"
#include "garden/util/fs.hpp"
#include "support.hpp"

using namespace garden;
using namespace garden::assets;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IoError;
}

engine::MockScenario imports_ok() {
    engine::MockScenario s;
    s.import_default = engine::MockImport{true, ""};
    return s;
}

}  // namespace

TEST_CASE("cosine distance") {
    CHECK(cosine_distance({1, 0}, {2, 0}) == doctest::Approx(0.0));
    CHECK(cosine_distance({1, 0}, {0, 3}) == doctest::Approx(1.0));
    CHECK(cosine_distance({1, 0}, {-1, 0}) == doctest::Approx(2.0));
    CHECK(cosine_distance({0, 0}, {1, 1}) == doctest::Approx(1.0));
    CHECK(code_of([] { cosine_distance({1}, {1, 2}); }) == ErrorCode::InvalidTarget);
}

TEST_CASE("hashing embedder is deterministic and token based") {
    HashingEmbedder e(16);
    CHECK(e.embed_text("Fluffy SHEEP!") == e.embed_text("fluffy sheep"));
    CHECK(e.embed_text("sheep").size() == 16);
    CHECK(cosine_distance(e.embed_text("white sheep"), e.embed_image("P3 # sheep white", "image/x-ppm")) <
          cosine_distance(e.embed_text("white sheep"), e.embed_text("red barn")));
}

TEST_CASE("index add, nearest and ties") {
    AssetIndex idx(2);
    CHECK(code_of([&] { idx.nearest({1, 0}); }) == ErrorCode::EmptyIndex);
    idx.add({"b", {1, 0}, "b.obj", "B"});
    idx.add({"a", {2, 0}, "a.obj", "A"});
    idx.add({"c", {0, 1}, "c.obj", "C"});
    CHECK(code_of([&] { idx.add({"a", {1, 1}, "", ""}); }) == ErrorCode::DuplicateAssetId);
    CHECK(code_of([&] { idx.add({"d", {1, 1, 1}, "", ""}); }) == ErrorCode::InvalidTarget);
    CHECK(code_of([&] { idx.add({"d", {NAN, 1}, "", ""}); }) == ErrorCode::InvalidTarget);
    CHECK(idx.nearest({5, 0.1}).entry->asset_id == "a");
    CHECK(idx.nearest({0.1, 5}).entry->asset_id == "c");
}

TEST_CASE("index files round-trip and reject bad documents") {
    testing::TempDir tmp("index");
    AssetIndex idx(3);
    idx.add({"rock", {0.1, -0.25, 1e-17}, "rock.obj", "Rock"});
    idx.save(tmp / "index.json");
    CHECK(AssetIndex::load(tmp / "index.json") == idx);
    fs::write_file(tmp / "bad.json", "{");
    CHECK(code_of([&] { AssetIndex::load(tmp / "bad.json"); }) == ErrorCode::CorruptDocument);
    CHECK(code_of([] { AssetIndex::from_json({{"version", 7}, {"dim", 1}, {"entries", nlohmann::json::array()}}); }) ==
          ErrorCode::VersionMismatch);
    CHECK(code_of([] { AssetIndex::from_json({{"version", 1}, {"dim", 1}}); }) == ErrorCode::CorruptDocument);
}

TEST_CASE("manifest parsing and index building") {
    testing::TempDir tmp("manifest");
    auto recs = parse_manifest("# comment\n\n{\"asset_id\": \"oak\", \"thumbnail\": \"t/oak.ppm\", "
                               "\"source_uri\": \"oak.obj\"}\n",
                               tmp.path());
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].thumbnail == tmp / "t/oak.ppm");
    CHECK(recs[0].display_name == "oak");
    CHECK(code_of([&] { parse_manifest("[1, 2]", tmp.path()); }) == ErrorCode::CorruptDocument);

    std::filesystem::create_directories(tmp / "m");
    fs::write_file(tmp / "m" / "oak.ppm", "P3 # oak tree");
    fs::write_file(tmp / "m" / "manifest.jsonl",
                   "{\"asset_id\": \"oak\", \"thumbnail\": \"oak.ppm\", \"source_uri\": \"oak.obj\", \"name\": \"Oak\"}\n"
                   "{\"asset_id\": \"web\", \"thumbnail\": \"oak.ppm\", \"source_uri\": \"https://x.test/a.glb\"}\n");
    HashingEmbedder e(8);
    auto idx = build_index(tmp / "m" / "manifest.jsonl", e, tmp / "out");
    REQUIRE(idx.entries().size() == 2);
    CHECK(idx.entries()[0].source_uri == "../m/oak.obj");
    CHECK(idx.entries()[0].embedding == e.embed_image("P3 # oak tree", "image/x-portable-pixmap"));
    CHECK(idx.entries()[1].source_uri == "https://x.test/a.glb");
    CHECK(build_index(tmp / "m" / "manifest.jsonl", e).entries()[0].source_uri == "oak.obj");
}

TEST_CASE("the fixture index matches a fresh build") {
    HashingEmbedder e(32);
    const auto dir = testing::fixture("sheep") / "assets";
    CHECK(build_index(dir / "manifest.jsonl", e) == AssetIndex::load(dir / "index.json"));
}

TEST_CASE("retrieval fetches, imports and registers the nearest asset") {
    testing::TempDir tmp("retrieve");
    const auto dir = testing::fixture("sheep") / "assets";
    auto index = AssetIndex::load(dir / "index.json");
    HashingEmbedder e(32);
    DefaultAssetSource src(dir);
    engine::MockEngine eng(engine::Workspace{tmp.path()}, imports_ok());
    AssetRegistry reg;
    RegistryRegistrar registrar(reg, tmp.path());

    auto rec = retrieve_nearest_asset("a fluffy white sheep", index, {e, src, eng, registrar}, NodeId{9});
    CHECK(rec.asset_id == "sheep");
    CHECK(rec.mesh_path == "assets/sheep/sheep.obj");
    CHECK(rec.origin == AssetOrigin::Downloaded);
    CHECK(rec.origin_node == NodeId{9});
    CHECK(eng.imports().size() == 1);
    // Second request for the same asset reuses the registration.
    CHECK(retrieve_nearest_asset("white sheep", index, {e, src, eng, registrar}) == rec);
    CHECK(eng.imports().size() == 1);

    CHECK(code_of([&] { retrieve_nearest_asset("x", AssetIndex(32), {e, src, eng, registrar}); }) ==
          ErrorCode::EmptyIndex);
    CHECK(code_of([&] { src.fetch("missing.obj", tmp / "d"); }) == ErrorCode::FetchError);
    CHECK(code_of([&] {
              register_asset(reg, {"ghost", "Ghost", "assets/ghost.obj", AssetOrigin::Downloaded, {}, {}}, tmp.path());
          }) == ErrorCode::MissingFile);
}

TEST_CASE("http fetch and http embedder") {
    httplib::Server server;
    server.Get("/meshes/cart.glb", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("glTF", "model/gltf-binary");
    });
    std::string last_body;
    server.Post("/v1/embeddings", [&](const httplib::Request& req, httplib::Response& res) {
        last_body = req.body;
        auto doc = nlohmann::json::parse(req.body);
        if (doc["input"][0].is_string() && doc["input"][0] == "broken") {
            res.status = 500;
            return;
        }
        res.set_content(R"({"data": [{"embedding": [0.5, 0.25, 1.0]}]})", "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    const std::string base = "http://127.0.0.1:" + std::to_string(port);

    testing::TempDir tmp("http-assets");
    DefaultAssetSource src;
    auto got = src.fetch(base + "/meshes/cart.glb?v=2", tmp / "cart");
    CHECK(got == tmp / "cart" / "cart.glb");
    CHECK(fs::read_file(got) == "glTF");
    CHECK(code_of([&] { src.fetch(base + "/meshes/none.glb", tmp / "x"); }) == ErrorCode::FetchError);

    HttpEmbedderConfig cfg;
    cfg.api_base = base + "/v1";
    HttpEmbedder emb(cfg);
    CHECK(emb.embed_text("sheep") == Embedding{0.5, 0.25, 1.0});
    CHECK(emb.dim() == 3);
    emb.embed_image("PNG", "image/png");
    CHECK(nlohmann::json::parse(last_body)["input"][0]["image"] == "data:image/png;base64,UE5H");
    CHECK(code_of([&] { emb.embed_text("broken"); }) == ErrorCode::EmbeddingProviderError);
    HttpEmbedder wrong_dim(cfg, 4);
    CHECK(code_of([&] { wrong_dim.embed_text("sheep"); }) == ErrorCode::EmbeddingProviderError);
    CHECK(code_of([] { HttpEmbedder(HttpEmbedderConfig{}); }) == ErrorCode::EmbeddingProviderError);

    server.stop();
    t.join();
}

TEST_CASE("mesh chain registers a generated asset with its preview") {
    testing::TempDir tmp("chain");
    MockTextToImage t2i({"image/png", "PNGDATA"});
    MockImageToMesh i2m({".obj", "v 0 0 0\n"});
    engine::MockEngine eng(engine::Workspace{tmp.path()}, imports_ok());
    AssetRegistry reg;
    RegistryRegistrar registrar(reg, tmp.path());

    auto rec = generate_mesh_chain("a hay bale", "mesh-7", "Hay bale", {t2i, i2m, eng, registrar}, NodeId{7});
    CHECK(rec.origin == AssetOrigin::Generated);
    CHECK(rec.mesh_path == "assets/mesh-7/mesh.obj");
    CHECK(rec.preview_image == "assets/mesh-7/preview.png");
    CHECK(fs::read_file(tmp / "assets/mesh-7/preview.png") == "PNGDATA");
    CHECK(t2i.prompts().at(0) == augment_mesh_prompt("a hay bale"));
    CHECK(reg.find("mesh-7") != nullptr);
}

TEST_CASE("mesh chain failures name their stage") {
    testing::TempDir tmp("chain-fail");
    MockTextToImage t2i({"image/png", "PNG"});
    MockImageToMesh i2m({".obj", "v 0 0 0\n"});
    engine::MockScenario sc;
    sc.import = {{false, "bad normals"}};
    engine::MockEngine eng(engine::Workspace{tmp.path()}, sc);
    AssetRegistry reg;
    RegistryRegistrar registrar(reg, tmp.path());
    MeshChainDeps deps{t2i, i2m, eng, registrar};

    auto stage_of = [&](const std::string& id) -> std::string {
        try {
            generate_mesh_chain("hay", id, "Hay", deps);
        } catch (const AdapterStageError& e) {
            CHECK(e.code() == ErrorCode::AdapterError);
            return e.stage();
        }
        return "none";
    };
    t2i.fail_next("quota");
    CHECK(stage_of("m1") == kStageTextToImage);
    i2m.fail_next("no geometry");
    CHECK(stage_of("m2") == kStageImageToMesh);
    CHECK(stage_of("m3") == kStageImport);
    CHECK(reg.records().empty());
    MockImageToMesh empty_mesh({".obj", ""});
    MeshChainDeps deps2{t2i, empty_mesh, eng, registrar};
    try {
        generate_mesh_chain("hay", "m4", "Hay", deps2);
        FAIL("expected a stage error");
    } catch (const AdapterStageError& e) {
        CHECK(e.stage() == kStageImageToMesh);
    }
}
