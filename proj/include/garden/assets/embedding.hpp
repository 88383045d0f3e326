#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace garden::assets {

using Embedding = std::vector<double>;

// 1 - cos(a, b). Throws InvalidTarget on dimension mismatch; a zero vector is
// at distance 1 from everything.
double cosine_distance(const Embedding& a, const Embedding& b);

// Shared text/image embedding space.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::size_t dim() const = 0;
    virtual Embedding embed_text(std::string_view text) = 0;
    virtual Embedding embed_image(std::string_view bytes, std::string_view mime) = 0;
};

// Deterministic stand-in: signed feature hashing of lowercase alphanumeric
// tokens. Images are tokenized from their raw bytes, so thumbnails carrying
// text (e.g. PPM comments) land near matching descriptions.
class HashingEmbedder : public Embedder {
public:
    explicit HashingEmbedder(std::size_t dim = 32) : dim_(dim) {}
    std::size_t dim() const override { return dim_; }
    Embedding embed_text(std::string_view text) override;
    Embedding embed_image(std::string_view bytes, std::string_view mime) override;

private:
    std::size_t dim_;
};

struct HttpEmbedderConfig {
    std::string api_base;  // EMBED_API_BASE
    std::string api_key;   // EMBED_API_KEY
    std::string model = "clip-vit-b-32";
    std::chrono::seconds timeout{60};

    static HttpEmbedderConfig from_env();
};

// POST {api_base}/embeddings with {"model", "input": [<item>]} where an item is
// a text string or {"image": "data:<mime>;base64,..."}; reads data[0].embedding.
// Any failure throws EmbeddingProviderError.
class HttpEmbedder : public Embedder {
public:
    explicit HttpEmbedder(HttpEmbedderConfig config, std::size_t dim = 0);
    std::size_t dim() const override { return dim_; }
    Embedding embed_text(std::string_view text) override;
    Embedding embed_image(std::string_view bytes, std::string_view mime) override;

private:
    Embedding request(const std::string& body);

    HttpEmbedderConfig config_;
    std::size_t dim_;
};

}  // namespace garden::assets
