#include "http_util.hpp"

#include <httplib.h>

#include <cstdlib>
#include <stdexcept>

namespace legalex::detail {

SplitUrl split_url(const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos)
        throw std::runtime_error("endpoint missing scheme: " + endpoint);
    auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

std::string post_json(const PostSpec& spec) {
    const SplitUrl url = split_url(spec.endpoint);
    httplib::Client client(url.base);
    client.set_connection_timeout(std::chrono::milliseconds(spec.timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(spec.timeout_ms));
    client.set_write_timeout(std::chrono::milliseconds(spec.timeout_ms));

    httplib::Headers headers;
    if (spec.api_key) headers.emplace("Authorization", "Bearer " + *spec.api_key);

    int last_status = 0;
    std::string last_error;
    const std::size_t attempts = spec.retry_limit + 1;
    for (std::size_t attempt = 1; attempt <= attempts; ++attempt) {
        auto res = client.Post(url.path, headers, spec.body, "application/json");
        if (!res) {
            last_status = 0;
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 200 && res->status < 300) return res->body;
        last_status = res->status;
        last_error = "HTTP " + std::to_string(res->status);
    }
    throw TransportError(spec.what + " failed after " + std::to_string(attempts) +
                             " attempts: " + last_error,
                         last_status, attempts);
}

std::optional<std::string> env_value(const std::string& name) {
    const char* value = std::getenv(name.c_str());
    if (!value || !*value) return std::nullopt;
    return std::string(value);
}

}  // namespace legalex::detail
