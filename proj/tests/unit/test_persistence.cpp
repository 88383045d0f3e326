#include <doctest.h>

#include "garden/error.hpp"
#include "garden/persistence/backup.hpp"
#include "garden/persistence/codec.hpp"
#include "garden/persistence/event_log.hpp"
#include "garden/persistence/journal.hpp"
#include "garden/util/fs.hpp"
#include "support.hpp"

using namespace garden;
using namespace garden::persistence;

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

Garden random_garden(std::uint64_t seed, EventLog& log) {
    std::mt19937_64 rng(seed);
    Garden g(testing::random_config(rng), "g" + std::to_string(seed));
    Journal j(g, log);
    j.record_created();
    testing::grow_random_garden(j, rng, 50);
    j.set_mode(Mode::Step, Actor::User);
    return g;
}

}  // namespace

TEST_CASE("garden document round-trips") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        EventLog log;
        Garden g = random_garden(s, log);
        const auto doc = save_garden(g);
        const Garden back = load_garden(doc);
        CHECK(back == g);
        CHECK(save_garden(back) == doc);
    }
}

TEST_CASE("garden document errors") {
    CHECK(code_of([] { load_garden("{not json"); }) == ErrorCode::CorruptDocument);
    CHECK(code_of([] { load_garden(R"({"schema_version": 99})"); }) == ErrorCode::VersionMismatch);
    EventLog log;
    auto doc = Json::parse(save_garden(random_garden(1, log)));
    doc["nodes"][0]["kind"] = "Mushroom";
    CHECK(code_of([&] { load_garden(doc.dump()); }) == ErrorCode::CorruptDocument);
}

TEST_CASE("config accepts partial documents and rejects bad values") {
    auto c = config_from_json(Json{{"max_depth", 5}});
    CHECK(c.max_depth == 5);
    CHECK(c.max_branching == GardenConfig{}.max_branching);
    CHECK(code_of([] { config_from_json(Json{{"max_branching", 0}}); }) == ErrorCode::InvalidConfig);
    CHECK(config_from_json(to_json(c)) == c);
}

TEST_CASE("event log persists, resumes and detects gaps") {
    testing::TempDir tmp("events");
    const auto file = tmp / "events.log";
    {
        EventLog log(file);
        log.set_clock([] { return std::string("2026-01-01T00:00:00Z"); });
        log.append(Actor::User, "ModeChanged", Json{{"mode", "Play"}});
        log.append(Actor::System, "WorkStarted", Json{{"kind", "Expand"}, {"target", 1}});
    }
    EventLog reopened(file);
    CHECK(reopened.last_seq() == 2);
    auto e = reopened.append(Actor::System, "WorkFinished", Json::object());
    CHECK(e.seq == 3);
    CHECK(read_event_file(file).size() == 3);
    CHECK(reopened.since(2).size() == 2);
    CHECK(reopened.events()[0].timestamp == "2026-01-01T00:00:00Z");

    GardenEvent bad;
    bad.seq = 7;
    bad.type = "X";
    CHECK(code_of([&] { reopened.append_existing(bad); }) == ErrorCode::SequenceGap);
    CHECK(code_of([] {
              parse_event_lines(R"({"seq":1,"ts":"t","actor":"System","type":"A","data":{}}
{"seq":3,"ts":"t","actor":"System","type":"B","data":{}})");
          }) == ErrorCode::SequenceGap);
}

TEST_CASE("wait_for wakes on append") {
    EventLog log;
    CHECK_FALSE(log.wait_for(1, std::chrono::milliseconds(10)));
    std::thread t([&] {
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        log.append(Actor::System, "Ping", Json::object());
    });
    CHECK(log.wait_for(1, std::chrono::seconds(5)));
    t.join();
}

TEST_CASE("replay rebuilds any prefix") {
    EventLog log;
    Garden g = random_garden(3, log);
    CHECK(save_garden(replay_events(log.events())) == save_garden(g));
    // A prefix replays to the garden as it was at that point.
    const auto events = log.events();
    Garden partial = replay_events(events, 3);
    CHECK(partial.size() <= 2);
    CHECK(code_of([&] {
              auto v = events;
              v.erase(v.begin() + 1);
              replay_events(v);
          }) == ErrorCode::SequenceGap);
}

TEST_CASE("backup store assigns ids and persists bundles") {
    testing::TempDir tmp("backups");
    EventLog log;
    Garden g = random_garden(5, log);
    BackupBundle b;
    b.edit = Json{{"kind", "ToggleLeaf"}};
    b.removed.push_back(g.node(*g.root()));
    {
        BackupStore store(tmp / "backups");
        CHECK(store.create(b).backup_id == "bk-0001");
        CHECK(store.create(b).backup_id == "bk-0002");
    }
    BackupStore reloaded(tmp / "backups");
    CHECK(reloaded.ids() == std::vector<std::string>{"bk-0001", "bk-0002"});
    CHECK(reloaded.get("bk-0001").removed == b.removed);
    CHECK(code_of([&] { reloaded.get("bk-0042"); }) == ErrorCode::UnknownBackup);
    CHECK(BackupBundle::from_json(reloaded.get("bk-0002").to_json()) == reloaded.get("bk-0002"));
}

TEST_CASE("restore_backup refuses conflicts without touching the garden") {
    EventLog log;
    Garden g = random_garden(8, log);
    const auto leaves = g.ordered_leaves();
    REQUIRE(!leaves.empty());
    BackupBundle b;
    b.removed.push_back(g.node(leaves.front()));  // still present
    const Garden before = g;
    CHECK(code_of([&] { restore_backup(g, b); }) == ErrorCode::ConflictingIds);
    CHECK(g == before);
}
