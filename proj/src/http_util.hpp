#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "legalex/embedder.hpp"  // TransportError

namespace legalex::detail {

struct SplitUrl {
    std::string base;  // scheme://host[:port]
    std::string path;  // leading slash, "/" when absent
};

SplitUrl split_url(const std::string& endpoint);

struct PostSpec {
    std::string endpoint;
    std::string body;                     // JSON payload
    std::optional<std::string> api_key;   // sent as Authorization: Bearer
    int timeout_ms = 30000;
    std::size_t retry_limit = 2;          // retries after the first attempt
    std::string what = "request";         // label used in error messages
};

// POSTs application/json, retrying transport faults and non-2xx statuses up
// to retry_limit times. Throws TransportError with the last status and the
// total attempt count when every attempt fails.
std::string post_json(const PostSpec& spec);

std::optional<std::string> env_value(const std::string& name);

}  // namespace legalex::detail
