#include "legalex/embedder.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

#include "http_util.hpp"
#include "legalex/parallel.hpp"

using nlohmann::json;

namespace legalex {

namespace {

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<double> mock_embed_one(const std::string& text, const MockEmbedderSpec& spec) {
    std::vector<double> acc(spec.dim, 0.0);
    auto bump = [&](std::string_view gram) {
        std::uint64_t h = mix64(spec.seed ^ fnv1a64(gram));
        std::size_t bucket = static_cast<std::size_t>(h % spec.dim);
        acc[bucket] += (h >> 63) ? 1.0 : -1.0;
    };
    if (text.size() < 3) {
        bump(text);
    } else {
        for (std::size_t i = 0; i + 3 <= text.size(); ++i)
            bump(std::string_view(text).substr(i, 3));
    }
    double norm2 = 0.0;
    for (double v : acc) norm2 += v * v;
    if (norm2 == 0.0) {
        acc[static_cast<std::size_t>(fnv1a64(text) % spec.dim)] = 1.0;
        norm2 = 1.0;
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (double& v : acc) v *= inv;
    return acc;
}

std::vector<std::vector<double>> remote_embed(const std::vector<std::string>& texts,
                                              const RemoteEmbedderSpec& spec) {
    std::vector<std::vector<double>> out(texts.size());
    const std::size_t batch = std::max<std::size_t>(1, spec.batch_size);
    const std::size_t n_batches = (texts.size() + batch - 1) / batch;
    auto api_key = detail::env_value(spec.api_key_env);

    parallel_for(n_batches, spec.max_concurrent_requests, [&](std::size_t b) {
        const std::size_t lo = b * batch;
        const std::size_t hi = std::min(texts.size(), lo + batch);
        json request = {{"model", spec.model}, {"input", json::array()}};
        for (std::size_t i = lo; i < hi; ++i) request["input"].push_back(texts[i]);

        detail::PostSpec post;
        post.endpoint = spec.endpoint;
        post.body = request.dump();
        post.api_key = api_key;
        post.timeout_ms = spec.timeout_ms;
        post.retry_limit = spec.retry_limit;
        post.what = "embedding batch " + std::to_string(b);
        const std::string body = detail::post_json(post);

        json response = json::parse(body, nullptr, false);
        if (response.is_discarded() || !response.contains("data") ||
            !response["data"].is_array())
            throw std::runtime_error("malformed embedding response for batch " +
                                     std::to_string(b));
        for (const auto& item : response["data"]) {
            std::size_t idx = item.at("index").get<std::size_t>();
            if (lo + idx >= hi) throw std::runtime_error("embedding index out of range");
            auto vec = item.at("embedding").get<std::vector<double>>();
            if (spec.dim != 0 && vec.size() != spec.dim)
                throw std::invalid_argument("embedding dimension mismatch: expected " +
                                            std::to_string(spec.dim) + ", got " +
                                            std::to_string(vec.size()));
            out[lo + idx] = std::move(vec);
        }
        for (std::size_t i = lo; i < hi; ++i)
            if (out[i].empty()) throw std::runtime_error("embedding response missing index");
    });
    return out;
}

}  // namespace

std::string embedder_identity(const EmbedderSpec& spec) {
    if (const auto* mock = std::get_if<MockEmbedderSpec>(&spec))
        return "mock:seed=" + std::to_string(mock->seed) + ":dim=" + std::to_string(mock->dim);
    const auto& remote = std::get<RemoteEmbedderSpec>(spec);
    return "remote:" + remote.model + ":dim=" + std::to_string(remote.dim);
}

std::size_t embedder_dim(const EmbedderSpec& spec) {
    if (const auto* mock = std::get_if<MockEmbedderSpec>(&spec)) return mock->dim;
    return std::get<RemoteEmbedderSpec>(spec).dim;
}

std::vector<std::vector<double>> embed(const std::vector<std::string>& texts,
                                       const EmbedderSpec& spec) {
    if (texts.empty()) return {};
    if (const auto* mock = std::get_if<MockEmbedderSpec>(&spec)) {
        if (mock->dim == 0) throw std::invalid_argument("mock embedder dim must be >= 1");
        std::vector<std::vector<double>> out(texts.size());
        for (std::size_t i = 0; i < texts.size(); ++i) out[i] = mock_embed_one(texts[i], *mock);
        return out;
    }
    return remote_embed(texts, std::get<RemoteEmbedderSpec>(spec));
}

std::vector<double> embed_one(const std::string& text, const EmbedderSpec& spec) {
    return embed(std::vector<std::string>{text}, spec).front();
}

}  // namespace legalex
