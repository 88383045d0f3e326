#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>

#include "garden/persistence/codec.hpp"
#include "garden/util/fs.hpp"
#include "support.hpp"

using namespace garden;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs gardenctl with stderr folded into stdout.
Run gardenctl(const std::string& args) {
    const std::string cmd = std::string("'") + GARDENCTL_PATH + "' " + args + " 2>&1";
    Run r;
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    while (auto n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("init, seed, step, play, status and export") {
    testing::TempDir tmp("cli");
    const auto ws = tmp / "ws";
    auto r = gardenctl("init " + q(ws) + " --config " + q(testing::fixture("sheep/config.json")));
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::exists(ws / "config.json"));
    CHECK(std::filesystem::exists(ws / "default" / "garden.json"));

    const std::string w = "-w " + q(ws) + " ";
    CHECK(gardenctl(w + "seed 'A herd of sheep grazing on rolling green hills'").out == "seed 1\n");
    r = gardenctl(w + "seed again");
    CHECK(r.code == 2);
    CHECK(r.out.find("error: ") == 0);

    r = gardenctl(w + "step 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("Expand 1: ok") == 0);
    CHECK(r.out.find("Expand 3") != std::string::npos);

    // Script progress survives between processes.
    r = gardenctl(w + "play");
    CHECK(r.code == 0);
    CHECK(r.out == "12 units\n");

    r = gardenctl("status " + w);
    CHECK(r.out.find("mode Play  nodes 22") != std::string::npos);
    CHECK(r.out.find("leaves: 2 5 6 8\n") != std::string::npos);
    CHECK(r.out.find("frontier:\n") != std::string::npos);
    CHECK(r.out.find("assets: 3") != std::string::npos);

    REQUIRE(gardenctl(w + "export " + q(tmp / "out.json")).code == 0);
    const auto doc = fs::read_file(tmp / "out.json");
    CHECK(doc == fs::read_file(ws / "default" / "garden.json"));
    CHECK(persistence::load_garden(doc).size() == 22);

    CHECK(gardenctl(w + "pause").code == 0);
    CHECK(gardenctl(w + "status").out.find("mode Paused") != std::string::npos);
    CHECK(gardenctl(w + "-g second status").out.find("(no seed)") != std::string::npos);
}

TEST_CASE("index build writes an index next to the manifest") {
    testing::TempDir tmp("cli-index");
    const auto src = testing::fixture("sheep/assets");
    for (const auto& e : std::filesystem::directory_iterator(src)) {
        if (e.path().filename() != "index.json") std::filesystem::copy_file(e.path(), tmp / e.path().filename());
    }
    auto r = gardenctl("index build " + q(tmp / "manifest.jsonl"));
    CHECK(r.code == 0);
    CHECK(r.out.find("indexed 6 assets") == 0);
    CHECK(fs::read_file(tmp / "index.json") == fs::read_file(src / "index.json"));
    CHECK(gardenctl("index build " + q(tmp / "missing.jsonl")).code != 0);
}

TEST_CASE("usage errors") {
    CHECK(gardenctl("").code != 0);
    CHECK(gardenctl("step 0").code != 0);
    CHECK(gardenctl("--help").out.find("seed") != std::string::npos);
}
