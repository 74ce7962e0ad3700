#pragma once

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "legalex/corpus.hpp"
#include "legalex/embedder.hpp"
#include "legalex/eval.hpp"
#include "legalex/llm_client.hpp"
#include "legalex/llm_extractor.hpp"
#include "legalex/regex_extractor.hpp"
#include "legalex/segmenter.hpp"

namespace legalex {

inline constexpr int kConfigVersion = 1;

/// Per-kind retrieval query material: exemplar blocks feeding tf-idf, plus an
/// optional hand-written override for the generated query text.
struct QuerySpec {
    std::vector<std::string> exemplars;
    std::optional<std::string> text_override;
};

struct PipelineConfig {
    int config_version = kConfigVersion;

    std::filesystem::path corpus_root;  // directory of .txt or a JSONL manifest
    std::vector<std::string> cleaning_patterns;
    ScopeFilter scope;
    std::size_t header_chars = 2000;

    SegmenterConfig segmenter;
    ExtractorConfig extractor;
    KeywordConfig keywords;

    EmbedderSpec embedder = MockEmbedderSpec{};
    std::size_t retrieval_k = 3;
    std::size_t top_m = 10;
    std::map<EntityKind, QuerySpec> queries;

    PromptTemplate prompt;
    LlmConfig llm;
    HallucinationConfig hallucination;
    std::vector<double> sweep_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

    double eval_tolerance = 0.01;
    std::optional<std::filesystem::path> gold_path;

    std::vector<double> histogram_edges{0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    std::optional<std::filesystem::path> cpi_csv;

    std::size_t workers = 4;
    std::filesystem::path output_dir = "out";

    // canonical parsed form and its hash, stamped into artifact provenance
    nlohmann::json canonical;
    std::string config_sha256;
};

// Parses and validates a config document. Relative paths resolve against
// `base_dir`. Rejects unknown config versions, out-of-range numbers, missing
// referenced files, and any embedded API key — credentials come exclusively
// from environment variables.
PipelineConfig config_from_json(const nlohmann::json& j,
                                const std::filesystem::path& base_dir);

PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace legalex
