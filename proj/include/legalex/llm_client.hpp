#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace legalex {

struct LlmConfig {
    std::string endpoint;  // e.g. http://host:port/v1/chat/completions
    std::string model;
    double temperature = 0.0;
    int max_output_tokens = 256;
    bool request_logprobs = true;
    std::size_t max_concurrent_requests = 4;
    std::size_t retry_limit = 2;
    int timeout_ms = 30000;
    std::string api_key_env = "LEGALEX_LLM_API_KEY";
    // when set, responses come from a JSONL fixture keyed by prompt sha256
    // instead of the wire: {"prompt_sha256", "response_text", "token_probs"}
    std::optional<std::string> mock_fixture_path;
};

struct ModelResponse {
    std::string text;
    std::vector<double> token_probs;  // exp of per-token logprobs, [] when unavailable
    std::vector<std::string> warnings;
};

// Chat-completion client over the OpenAI-compatible wire protocol, or a
// deterministic fixture table when cfg.mock_fixture_path is set.
class LlmClient {
  public:
    explicit LlmClient(LlmConfig cfg);

    /// Completes one prompt. Throws TransportError after exhausted retries and
    /// std::runtime_error for malformed responses or missing fixtures.
    ModelResponse complete(const std::string& prompt) const;

    const LlmConfig& config() const { return cfg_; }

  private:
    LlmConfig cfg_;
    std::map<std::string, std::pair<std::string, std::vector<double>>> fixtures_;
};

/// One-shot convenience wrapper around LlmClient.
ModelResponse call_model(const std::string& prompt, const LlmConfig& cfg);

}  // namespace legalex
