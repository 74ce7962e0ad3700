#include "legalex/config.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <stdexcept>

#include "legalex/hashing.hpp"

using nlohmann::json;

namespace legalex {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw std::runtime_error("config error: " + message);
}

std::filesystem::path resolve(const std::filesystem::path& base_dir,
                              const std::filesystem::path& path) {
    return (path.is_absolute() ? path : base_dir / path).lexically_normal();
}

std::filesystem::path required_file(const std::filesystem::path& base_dir,
                                    const std::string& raw, const std::string& what) {
    std::filesystem::path resolved = resolve(base_dir, raw);
    if (!std::filesystem::exists(resolved))
        fail(what + " does not exist: " + resolved.string());
    return resolved;
}

void reject_api_keys(const json& section, const std::string& where) {
    if (section.contains("api_key") || section.contains("apikey"))
        fail("API keys are not allowed in config files (" + where +
             "); set the *_API_KEY environment variable instead");
}

std::vector<std::string> string_list(const json& j, const char* key,
                                     std::vector<std::string> fallback = {}) {
    if (!j.contains(key)) return fallback;
    return j[key].get<std::vector<std::string>>();
}

void require_compiles(const std::string& pattern, const std::string& what) {
    try {
        std::regex probe(pattern);
    } catch (const std::regex_error& e) {
        fail(what + " does not compile: \"" + pattern + "\" (" + e.what() + ")");
    }
}

EntityKind kind_from_key(const std::string& name, const std::string& where) {
    auto kind = parse_entity_kind(name);
    if (!kind) fail("unknown entity kind \"" + name + "\" in " + where);
    return *kind;
}

}  // namespace

PipelineConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) fail("top level must be an object");

    static const std::set<std::string> known_keys = {
        "config_version", "corpus",  "segmenter", "extract", "keywords", "retrieval",
        "prompt",         "llm",     "hallucination",        "eval",     "stats",
        "workers",        "output_dir"};
    for (const auto& [key, value] : j.items())
        if (!known_keys.count(key)) fail("unknown top-level key \"" + key + "\"");

    PipelineConfig cfg;
    cfg.canonical = j;
    cfg.config_sha256 = sha256_hex(j.dump());

    if (!j.contains("config_version") || !j["config_version"].is_number_integer())
        fail("config_version is required");
    cfg.config_version = j["config_version"].get<int>();
    if (cfg.config_version != kConfigVersion)
        fail("unsupported config_version " + std::to_string(cfg.config_version) +
             " (expected " + std::to_string(kConfigVersion) + ")");

    if (!j.contains("corpus") || !j["corpus"].is_object() ||
        !j["corpus"].contains("root"))
        fail("corpus.root is required");
    const json& corpus = j["corpus"];
    cfg.corpus_root = resolve(base_dir, corpus["root"].get<std::string>());
    if (!std::filesystem::exists(cfg.corpus_root))
        fail("corpus root does not exist: " + cfg.corpus_root.string());
    cfg.cleaning_patterns = string_list(corpus, "cleaning_patterns");
    for (const std::string& pattern : cfg.cleaning_patterns)
        require_compiles(pattern, "cleaning pattern");
    cfg.scope.must_patterns = string_list(corpus, "scope_must");
    cfg.scope.must_not_patterns = string_list(corpus, "scope_must_not");
    cfg.header_chars = corpus.value("header_chars", std::size_t{2000});

    if (j.contains("segmenter")) {
        const json& seg = j["segmenter"];
        cfg.segmenter.block_size = seg.value("block_size", cfg.segmenter.block_size);
        cfg.segmenter.expansion_radius =
            seg.value("expansion_radius", cfg.segmenter.expansion_radius);
        cfg.segmenter.regex_window_chars =
            seg.value("regex_window_chars", cfg.segmenter.regex_window_chars);
        cfg.segmenter.percent_pattern =
            seg.value("percent_pattern", cfg.segmenter.percent_pattern);
        cfg.segmenter.merge_windows = seg.value("merge_windows", true);
    }
    if (cfg.segmenter.block_size < 1) fail("segmenter.block_size must be >= 1");
    require_compiles(cfg.segmenter.percent_pattern, "segmenter.percent_pattern");

    if (j.contains("extract"))
        cfg.extractor.corrected_percent_pattern =
            j["extract"].value("corrected_percent_pattern", false);

    if (j.contains("keywords")) {
        const json& kw = j["keywords"];
        cfg.keywords.physical = string_list(kw, "physical", cfg.keywords.physical);
        cfg.keywords.psychological =
            string_list(kw, "psychological", cfg.keywords.psychological);
        cfg.keywords.moral = string_list(kw, "moral", cfg.keywords.moral);
    }

    if (j.contains("retrieval")) {
        const json& retrieval = j["retrieval"];
        cfg.retrieval_k = retrieval.value("k", cfg.retrieval_k);
        cfg.top_m = retrieval.value("top_m", cfg.top_m);
        if (retrieval.contains("embedder")) {
            const json& emb = retrieval["embedder"];
            reject_api_keys(emb, "retrieval.embedder");
            const std::string type = emb.value("type", "mock");
            if (type == "mock") {
                MockEmbedderSpec spec;
                spec.seed = emb.value("seed", spec.seed);
                spec.dim = emb.value("dim", spec.dim);
                if (spec.dim < 1) fail("embedder dim must be >= 1");
                cfg.embedder = spec;
            } else if (type == "remote") {
                RemoteEmbedderSpec spec;
                if (!emb.contains("endpoint") || !emb.contains("model") ||
                    !emb.contains("dim"))
                    fail("remote embedder needs endpoint, model and dim");
                spec.endpoint = emb["endpoint"].get<std::string>();
                spec.model = emb["model"].get<std::string>();
                spec.dim = emb["dim"].get<std::size_t>();
                spec.retry_limit = emb.value("retry_limit", spec.retry_limit);
                spec.batch_size = emb.value("batch_size", spec.batch_size);
                spec.max_concurrent_requests =
                    emb.value("max_concurrent_requests", spec.max_concurrent_requests);
                spec.timeout_ms = emb.value("timeout_ms", spec.timeout_ms);
                spec.api_key_env = emb.value("api_key_env", spec.api_key_env);
                if (spec.dim < 1) fail("embedder dim must be >= 1");
                if (spec.batch_size < 1) fail("embedder batch_size must be >= 1");
                if (spec.max_concurrent_requests < 1)
                    fail("embedder max_concurrent_requests must be >= 1");
                cfg.embedder = spec;
            } else {
                fail("unknown embedder type \"" + type + "\"");
            }
        }
        if (retrieval.contains("queries")) {
            for (const auto& [name, value] : retrieval["queries"].items()) {
                QuerySpec spec;
                spec.exemplars = string_list(value, "exemplars");
                if (value.contains("text"))
                    spec.text_override = value["text"].get<std::string>();
                cfg.queries[kind_from_key(name, "retrieval.queries")] = std::move(spec);
            }
        }
    }
    if (cfg.retrieval_k < 1) fail("retrieval.k must be >= 1");
    if (cfg.top_m < 1) fail("retrieval.top_m must be >= 1");

    cfg.prompt = default_prompt_template();
    if (j.contains("prompt")) {
        const json& prompt = j["prompt"];
        if (prompt.contains("template"))
            cfg.prompt.text = prompt["template"].get<std::string>();
        if (prompt.contains("instructions"))
            for (const auto& [name, value] : prompt["instructions"].items())
                cfg.prompt.instructions[kind_from_key(name, "prompt.instructions")] =
                    value.get<std::string>();
    }

    if (j.contains("llm")) {
        const json& llm = j["llm"];
        reject_api_keys(llm, "llm");
        cfg.llm.endpoint = llm.value("endpoint", "");
        cfg.llm.model = llm.value("model", "");
        cfg.llm.temperature = llm.value("temperature", cfg.llm.temperature);
        cfg.llm.max_output_tokens =
            llm.value("max_output_tokens", cfg.llm.max_output_tokens);
        cfg.llm.request_logprobs = llm.value("request_logprobs", true);
        cfg.llm.max_concurrent_requests =
            llm.value("max_concurrent_requests", cfg.llm.max_concurrent_requests);
        cfg.llm.retry_limit = llm.value("retry_limit", cfg.llm.retry_limit);
        cfg.llm.timeout_ms = llm.value("timeout_ms", cfg.llm.timeout_ms);
        cfg.llm.api_key_env = llm.value("api_key_env", cfg.llm.api_key_env);
        if (llm.contains("mock_fixture"))
            cfg.llm.mock_fixture_path =
                required_file(base_dir, llm["mock_fixture"].get<std::string>(),
                              "llm.mock_fixture")
                    .string();
    }
    if (cfg.llm.temperature < 0) fail("llm.temperature must be >= 0");
    if (cfg.llm.max_concurrent_requests < 1)
        fail("llm.max_concurrent_requests must be >= 1");

    if (j.contains("hallucination")) {
        const json& hall = j["hallucination"];
        cfg.hallucination.p_u = hall.value("p_u", cfg.hallucination.p_u);
        if (hall.contains("sweep_grid"))
            cfg.sweep_grid = hall["sweep_grid"].get<std::vector<double>>();
    }
    if (cfg.hallucination.p_u < 0.0 || cfg.hallucination.p_u > 1.0)
        fail("hallucination.p_u must lie in [0, 1]");
    for (double p : cfg.sweep_grid)
        if (p < 0.0 || p > 1.0) fail("hallucination.sweep_grid values must lie in [0, 1]");

    if (j.contains("eval")) {
        const json& eval = j["eval"];
        cfg.eval_tolerance = eval.value("tolerance", cfg.eval_tolerance);
        if (eval.contains("gold"))
            cfg.gold_path =
                required_file(base_dir, eval["gold"].get<std::string>(), "eval.gold");
    }
    if (cfg.eval_tolerance <= 0.0) fail("eval.tolerance must be positive");

    if (j.contains("stats")) {
        const json& stats = j["stats"];
        if (stats.contains("histogram_edges"))
            cfg.histogram_edges = stats["histogram_edges"].get<std::vector<double>>();
        if (stats.contains("cpi_csv"))
            cfg.cpi_csv =
                required_file(base_dir, stats["cpi_csv"].get<std::string>(), "stats.cpi_csv");
    }
    if (cfg.histogram_edges.size() < 2) fail("stats.histogram_edges needs >= 2 edges");
    for (std::size_t i = 1; i < cfg.histogram_edges.size(); ++i)
        if (cfg.histogram_edges[i] <= cfg.histogram_edges[i - 1])
            fail("stats.histogram_edges must be strictly ascending");

    cfg.workers = j.value("workers", cfg.workers);
    if (cfg.workers < 1) fail("workers must be >= 1");
    cfg.output_dir = resolve(base_dir, j.value("output_dir", std::string("out")));

    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read config file " + path.string());
    json parsed = json::parse(in, nullptr, false);
    if (parsed.is_discarded()) fail("config file is not valid JSON: " + path.string());
    return config_from_json(parsed, path.has_parent_path()
                                        ? path.parent_path()
                                        : std::filesystem::current_path());
}

}  // namespace legalex
