#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garden/persistence/codec.hpp"

namespace garden::persistence {

enum class Actor { System, User };
std::string_view to_string(Actor a);

struct GardenEvent {
    std::uint64_t seq = 0;
    std::string timestamp;  // ISO-8601 UTC
    Actor actor = Actor::System;
    std::string type;
    Json data = Json::object();

    Json to_json() const;
    static GardenEvent from_json(const Json& j);
    std::string to_line() const;  // one JSON line, no newline

    friend bool operator==(const GardenEvent&, const GardenEvent&) = default;
};

using Clock = std::function<std::string()>;
std::string utc_now_iso8601();

// Append-only, gapless event sequence (seq starts at 1), optionally backed by a
// line-delimited file that is flushed on every append. Thread-safe.
class EventLog {
public:
    EventLog() = default;
    // Loads any existing events from `file` and appends to it.
    explicit EventLog(std::filesystem::path file);

    void set_clock(Clock clock);

    GardenEvent append(Actor actor, std::string type, Json data);
    // Appends an already-numbered event; throws SequenceGap unless seq == last_seq() + 1.
    void append_existing(const GardenEvent& event);

    std::uint64_t last_seq() const;
    std::vector<GardenEvent> events() const;
    // Events with seq >= from.
    std::vector<GardenEvent> since(std::uint64_t from) const;
    // Blocks until an event with seq >= from exists or the timeout expires.
    bool wait_for(std::uint64_t from, std::chrono::milliseconds timeout) const;

    const std::optional<std::filesystem::path>& file() const { return file_; }

private:
    mutable std::mutex mu_;
    mutable std::condition_variable cv_;
    std::vector<GardenEvent> events_;
    std::optional<std::filesystem::path> file_;
    Clock clock_ = utc_now_iso8601;
};

// Parses a line-delimited log; throws SequenceGap if seq is not 1, 2, 3, ...
std::vector<GardenEvent> read_event_file(const std::filesystem::path& file);
std::vector<GardenEvent> parse_event_lines(std::string_view text);

}  // namespace garden::persistence
