#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace legalex {

/// Thrown after all retries against a remote service are exhausted.
class TransportError : public std::runtime_error {
  public:
    TransportError(std::string message, int status, std::size_t attempts)
        : std::runtime_error(std::move(message)), status_(status), attempts_(attempts) {}

    int status() const { return status_; }          // HTTP status, 0 for transport faults
    std::size_t attempts() const { return attempts_; }

  private:
    int status_;
    std::size_t attempts_;
};

// Deterministic offline embedder: seeded hashing of byte trigrams into `dim`
// signed buckets, L2-normalized. Similarity roughly tracks lexical overlap,
// which is enough to make retrieval fixtures meaningful without a model.
struct MockEmbedderSpec {
    std::uint64_t seed = 1;
    std::size_t dim = 64;
};

/// OpenAI-embeddings-compatible endpoint. The API key is read from
/// `api_key_env` at call time and never stored in config files.
struct RemoteEmbedderSpec {
    std::string endpoint;  // e.g. http://host:port/v1/embeddings
    std::string model;
    std::size_t dim = 0;
    std::size_t retry_limit = 2;    // retries after the first attempt
    std::size_t batch_size = 16;
    std::size_t max_concurrent_requests = 4;
    int timeout_ms = 30000;
    std::string api_key_env = "LEGALEX_EMBED_API_KEY";
};

using EmbedderSpec = std::variant<MockEmbedderSpec, RemoteEmbedderSpec>;

/// Stable identity string recorded in persisted indexes; loading an index
/// built by a different embedder is a hard error.
std::string embedder_identity(const EmbedderSpec& spec);

std::size_t embedder_dim(const EmbedderSpec& spec);

/// One vector per input text, order preserved. Pure for the mock embedder.
std::vector<std::vector<double>> embed(const std::vector<std::string>& texts,
                                       const EmbedderSpec& spec);

std::vector<double> embed_one(const std::string& text, const EmbedderSpec& spec);

}  // namespace legalex
