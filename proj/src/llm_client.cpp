#include "legalex/llm_client.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "http_util.hpp"
#include "legalex/hashing.hpp"
#include "legalex/text_util.hpp"

using nlohmann::json;

namespace legalex {

namespace {

ModelResponse parse_chat_response(const std::string& body, bool logprobs_requested) {
    json response = json::parse(body, nullptr, false);
    if (response.is_discarded()) throw std::runtime_error("malformed chat response body");
    if (!response.contains("choices") || !response["choices"].is_array() ||
        response["choices"].empty())
        throw std::runtime_error("chat response has no choices");
    const json& choice = response["choices"][0];

    ModelResponse out;
    if (choice.contains("message") && choice["message"].contains("content") &&
        choice["message"]["content"].is_string())
        out.text = choice["message"]["content"].get<std::string>();
    else if (choice.contains("text") && choice["text"].is_string())
        out.text = choice["text"].get<std::string>();
    else
        throw std::runtime_error("chat response carries no text");

    bool have_probs = false;
    if (choice.contains("logprobs") && choice["logprobs"].is_object() &&
        choice["logprobs"].contains("content") && choice["logprobs"]["content"].is_array()) {
        for (const auto& item : choice["logprobs"]["content"]) {
            if (!item.contains("logprob") || !item["logprob"].is_number()) continue;
            out.token_probs.push_back(std::exp(item["logprob"].get<double>()));
        }
        have_probs = !out.token_probs.empty();
    }
    if (logprobs_requested && !have_probs) {
        out.token_probs.clear();
        out.warnings.push_back("server omitted token logprobs; continuing without them");
    }
    return out;
}

}  // namespace

LlmClient::LlmClient(LlmConfig cfg) : cfg_(std::move(cfg)) {
    if (!cfg_.mock_fixture_path) return;
    std::ifstream in(*cfg_.mock_fixture_path);
    if (!in)
        throw std::runtime_error("cannot open LLM fixture: " + *cfg_.mock_fixture_path);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        json entry = json::parse(line, nullptr, false);
        if (entry.is_discarded() || !entry.contains("prompt_sha256") ||
            !entry.contains("response_text"))
            throw std::runtime_error("malformed LLM fixture line in " +
                                     *cfg_.mock_fixture_path);
        std::vector<double> probs;
        if (entry.contains("token_probs") && entry["token_probs"].is_array())
            probs = entry["token_probs"].get<std::vector<double>>();
        fixtures_[entry["prompt_sha256"].get<std::string>()] = {
            entry["response_text"].get<std::string>(), std::move(probs)};
    }
}

ModelResponse LlmClient::complete(const std::string& prompt) const {
    if (cfg_.mock_fixture_path) {
        const std::string key = sha256_hex(prompt);
        auto it = fixtures_.find(key);
        if (it == fixtures_.end())
            throw std::runtime_error("no fixture response for prompt sha256 " + key);
        ModelResponse out;
        out.text = it->second.first;
        out.token_probs = it->second.second;
        if (cfg_.request_logprobs && out.token_probs.empty())
            out.warnings.push_back("fixture carries no token probs");
        return out;
    }

    json request = {
        {"model", cfg_.model},
        {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
        {"temperature", cfg_.temperature},
        {"max_tokens", cfg_.max_output_tokens},
    };
    if (cfg_.request_logprobs) request["logprobs"] = true;

    detail::PostSpec post;
    post.endpoint = cfg_.endpoint;
    post.body = request.dump();
    post.api_key = detail::env_value(cfg_.api_key_env);
    post.timeout_ms = cfg_.timeout_ms;
    post.retry_limit = cfg_.retry_limit;
    post.what = "chat completion";
    return parse_chat_response(detail::post_json(post), cfg_.request_logprobs);
}

ModelResponse call_model(const std::string& prompt, const LlmConfig& cfg) {
    return LlmClient(cfg).complete(prompt);
}

}  // namespace legalex
