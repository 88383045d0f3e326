#include "garden/persistence/event_log.hpp"

#include <ctime>

#include "garden/error.hpp"
#include "garden/util/fs.hpp"
#include "garden/util/text.hpp"

namespace garden::persistence {

namespace {

void check_next(std::uint64_t last, std::uint64_t seq) {
    if (seq != last + 1) {
        fail(ErrorCode::SequenceGap, "expected seq " + std::to_string(last + 1) + ", got " + std::to_string(seq));
    }
}

}  // namespace

std::string_view to_string(Actor a) { return a == Actor::User ? "User" : "System"; }

std::string utc_now_iso8601() {
    auto now = std::chrono::system_clock::now();
    auto secs = std::chrono::system_clock::to_time_t(now);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[40];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

Json GardenEvent::to_json() const {
    Json j;
    j["seq"] = seq;
    j["ts"] = timestamp;
    j["actor"] = to_string(actor);
    j["type"] = type;
    j["data"] = data;
    return j;
}

GardenEvent GardenEvent::from_json(const Json& j) {
    return decode("event", [&] {
        GardenEvent e;
        e.seq = j.at("seq").get<std::uint64_t>();
        e.timestamp = j.at("ts").get<std::string>();
        auto actor = j.at("actor").get<std::string>();
        if (actor != "User" && actor != "System") fail(ErrorCode::CorruptDocument, "unknown actor " + actor);
        e.actor = actor == "User" ? Actor::User : Actor::System;
        e.type = j.at("type").get<std::string>();
        e.data = j.at("data");
        return e;
    });
}

std::string GardenEvent::to_line() const { return to_json().dump(); }

std::vector<GardenEvent> parse_event_lines(std::string_view text) {
    std::vector<GardenEvent> out;
    for (const auto& line : text::split_lines(text)) {
        if (text::trim(line).empty()) continue;
        auto j = Json::parse(line, nullptr, false);
        if (j.is_discarded()) fail(ErrorCode::CorruptDocument, "event line is not JSON: " + text::excerpt(line, 80));
        auto e = GardenEvent::from_json(j);
        check_next(out.empty() ? 0 : out.back().seq, e.seq);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<GardenEvent> read_event_file(const std::filesystem::path& file) {
    return parse_event_lines(fs::read_file(file));
}

EventLog::EventLog(std::filesystem::path file) : file_(std::move(file)) {
    if (std::filesystem::exists(*file_)) events_ = read_event_file(*file_);
}

void EventLog::set_clock(Clock clock) {
    std::lock_guard lock(mu_);
    clock_ = std::move(clock);
}

GardenEvent EventLog::append(Actor actor, std::string type, Json data) {
    GardenEvent e;
    {
        std::lock_guard lock(mu_);
        e.seq = events_.empty() ? 1 : events_.back().seq + 1;
        e.timestamp = clock_();
        e.actor = actor;
        e.type = std::move(type);
        e.data = std::move(data);
        if (file_) fs::append_line(*file_, e.to_line());
        events_.push_back(e);
    }
    cv_.notify_all();
    return e;
}

void EventLog::append_existing(const GardenEvent& event) {
    {
        std::lock_guard lock(mu_);
        check_next(events_.empty() ? 0 : events_.back().seq, event.seq);
        if (file_) fs::append_line(*file_, event.to_line());
        events_.push_back(event);
    }
    cv_.notify_all();
}

std::uint64_t EventLog::last_seq() const {
    std::lock_guard lock(mu_);
    return events_.empty() ? 0 : events_.back().seq;
}

std::vector<GardenEvent> EventLog::events() const {
    std::lock_guard lock(mu_);
    return events_;
}

std::vector<GardenEvent> EventLog::since(std::uint64_t from) const {
    std::lock_guard lock(mu_);
    if (from <= 1) return events_;
    // seq is gapless from 1, so seq k sits at index k-1.
    if (from > events_.size()) return {};
    return {events_.begin() + static_cast<std::ptrdiff_t>(from - 1), events_.end()};
}

bool EventLog::wait_for(std::uint64_t from, std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mu_);
    return cv_.wait_for(lock, timeout, [&] { return !events_.empty() && events_.back().seq >= from; });
}

}  // namespace garden::persistence
