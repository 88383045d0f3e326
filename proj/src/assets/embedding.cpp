#include "garden/assets/embedding.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "garden/error.hpp"
#include "garden/util/hash.hpp"
#include "garden/util/url.hpp"

namespace garden::assets {

namespace {

Embedding hash_tokens(std::string_view data, std::size_t dim) {
    Embedding v(dim, 0.0);
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        auto h = fnv1a(token);
        v[h % dim] += (h >> 63) ? -1.0 : 1.0;
        token.clear();
    };
    for (char c : data) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else {
            flush();
        }
    }
    flush();
    return v;
}

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

}  // namespace

double cosine_distance(const Embedding& a, const Embedding& b) {
    if (a.size() != b.size()) {
        fail(ErrorCode::InvalidTarget,
             "embedding dimensions differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) return 1.0;
    return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

Embedding HashingEmbedder::embed_text(std::string_view text) { return hash_tokens(text, dim_); }

Embedding HashingEmbedder::embed_image(std::string_view bytes, std::string_view) { return hash_tokens(bytes, dim_); }

HttpEmbedderConfig HttpEmbedderConfig::from_env() {
    HttpEmbedderConfig c;
    c.api_base = env_or("EMBED_API_BASE", "");
    c.api_key = env_or("EMBED_API_KEY", "");
    c.model = env_or("EMBED_MODEL", c.model);
    return c;
}

HttpEmbedder::HttpEmbedder(HttpEmbedderConfig config, std::size_t dim) : config_(std::move(config)), dim_(dim) {
    if (config_.api_base.empty()) fail(ErrorCode::EmbeddingProviderError, "EMBED_API_BASE is not set");
}

Embedding HttpEmbedder::embed_text(std::string_view text) {
    nlohmann::json body = {{"model", config_.model}, {"input", nlohmann::json::array({std::string(text)})}};
    return request(body.dump());
}

Embedding HttpEmbedder::embed_image(std::string_view bytes, std::string_view mime) {
    auto uri = "data:" + std::string(mime) + ";base64," + httplib::detail::base64_encode(std::string(bytes));
    nlohmann::json body = {{"model", config_.model}, {"input", nlohmann::json::array({{{"image", uri}}})}};
    return request(body.dump());
}

Embedding HttpEmbedder::request(const std::string& body) {
    const auto base = split_base_url(config_.api_base);
    httplib::Client client(base.scheme_host_port);
    client.set_read_timeout(config_.timeout);
    client.set_connection_timeout(std::chrono::seconds(10));
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    auto res = client.Post(base.path_prefix + "/embeddings", headers, body, "application/json");
    if (!res) fail(ErrorCode::EmbeddingProviderError, "transport: " + httplib::to_string(res.error()));
    if (res->status != 200) {
        fail(ErrorCode::EmbeddingProviderError, "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    Embedding out;
    try {
        auto doc = nlohmann::json::parse(res->body);
        out = doc.at("data").at(0).at("embedding").get<Embedding>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::EmbeddingProviderError, std::string("malformed response: ") + e.what());
    }
    if (out.empty()) fail(ErrorCode::EmbeddingProviderError, "empty embedding");
    if (dim_ == 0) dim_ = out.size();
    if (out.size() != dim_) {
        fail(ErrorCode::EmbeddingProviderError, "embedding has dim " + std::to_string(out.size()) + ", expected " +
                                                    std::to_string(dim_));
    }
    return out;
}

}  // namespace garden::assets
