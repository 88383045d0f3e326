#include "garden/llm/replay_provider.hpp"

#include <algorithm>

#include "garden/error.hpp"
#include "garden/util/fs.hpp"
#include "garden/util/text.hpp"

namespace garden::llm {

ReplayProvider::ReplayProvider(ReplayProvider&& other) noexcept {
    std::lock_guard lock(other.mu_);
    queues_ = std::move(other.queues_);
    keyed_ = std::move(other.keyed_);
    captured_ = std::move(other.captured_);
    consumed_ = std::move(other.consumed_);
    vision_ = other.vision_;
}

ReplayProvider ReplayProvider::from_directory(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) fail(ErrorCode::MissingFile, "replay directory " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    ReplayProvider p;
    for (const auto& f : files) {
        auto stem = f.stem().string();
        auto dash = stem.find('-');
        if (dash == std::string::npos || dash + 1 >= stem.size()) {
            fail(ErrorCode::CorruptDocument, "replay file name lacks role: " + f.filename().string());
        }
        auto role = stem.substr(dash + 1);
        auto body = fs::read_file(f);
        std::optional<int> images;
        if (body.rfind("#! images=", 0) == 0) {
            auto nl = body.find('\n');
            auto header = body.substr(10, nl == std::string::npos ? std::string::npos : nl - 10);
            try {
                images = std::stoi(text::trim(header));
            } catch (const std::exception&) {
                fail(ErrorCode::CorruptDocument, "bad images header in " + f.filename().string());
            }
            body = nl == std::string::npos ? std::string() : body.substr(nl + 1);
        }
        p.push(role, std::move(body), images);
    }
    return p;
}

void ReplayProvider::push(const std::string& role, std::string text, std::optional<int> expected_images) {
    std::lock_guard lock(mu_);
    queues_[role].push_back({std::move(text), expected_images});
}

void ReplayProvider::push_keyed(const std::string& prompt_hash, int image_count, std::string text) {
    std::lock_guard lock(mu_);
    keyed_[{prompt_hash, image_count}].push_back(std::move(text));
}

void ReplayProvider::skip(const std::string& role, std::size_t n) {
    std::lock_guard lock(mu_);
    auto& q = queues_[role];
    if (n > q.size()) fail(ErrorCode::ScriptExhausted, "cannot skip " + std::to_string(n) + " " + role + " entries");
    q.erase(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(n));
    if (n > 0) consumed_[role] += n;
}

std::map<std::string, std::size_t> ReplayProvider::consumed() const {
    std::lock_guard lock(mu_);
    return consumed_;
}

std::size_t ReplayProvider::remaining(const std::string& role) const {
    std::lock_guard lock(mu_);
    auto it = queues_.find(role);
    return it == queues_.end() ? 0 : it->second.size();
}

std::size_t ReplayProvider::remaining_total() const {
    std::lock_guard lock(mu_);
    std::size_t n = 0;
    for (const auto& [_, q] : queues_) n += q.size();
    return n;
}

std::vector<CapturedRequest> ReplayProvider::captured() const {
    std::lock_guard lock(mu_);
    return captured_;
}

std::vector<CapturedRequest> ReplayProvider::captured(const std::string& role) const {
    std::lock_guard lock(mu_);
    std::vector<CapturedRequest> out;
    for (const auto& c : captured_) {
        if (c.request.role_tag == role) out.push_back(c);
    }
    return out;
}

CompletionResponse ReplayProvider::do_complete(const CompletionRequest& request) {
    std::lock_guard lock(mu_);
    const int image_count = static_cast<int>(request.images.size());
    std::string text;
    auto keyed = keyed_.find({request.prompt_hash(), image_count});
    if (keyed != keyed_.end() && !keyed->second.empty()) {
        text = std::move(keyed->second.front());
        keyed->second.pop_front();
    } else {
        auto it = queues_.find(request.role_tag);
        if (it == queues_.end() || it->second.empty()) {
            fail(ErrorCode::ScriptExhausted, "no scripted response left for role " + request.role_tag);
        }
        const auto expected = it->second.front().expected_images;
        if (expected && *expected != image_count) {
            fail(ErrorCode::ScriptMismatch, request.role_tag + " expected " + std::to_string(*expected) +
                                                " images, request carried " + std::to_string(image_count));
        }
        Entry entry = std::move(it->second.front());
        it->second.pop_front();
        ++consumed_[request.role_tag];
        text = std::move(entry.text);
    }
    captured_.push_back({request, text});
    CompletionResponse resp;
    resp.text = std::move(text);
    resp.provider_meta = {{"provider", "replay"}, {"role", request.role_tag}, {"images", image_count}};
    return resp;
}

}  // namespace garden::llm
