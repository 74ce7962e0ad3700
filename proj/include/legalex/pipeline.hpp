#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "legalex/config.hpp"
#include "legalex/corpus.hpp"
#include "legalex/llm_extractor.hpp"
#include "legalex/retrieval.hpp"
#include "legalex/segmenter.hpp"

namespace legalex {

/// Outcome of one CLI stage. `errors` are partial, per-record failures — the
/// stage still succeeded and its artifacts are on disk. Fatal problems throw.
struct StageResult {
    std::size_t n_processed = 0;
    std::vector<ErrorRecord> errors;
    std::vector<std::string> notes;  // human-readable summary lines
};

std::filesystem::path artifact_path(const PipelineConfig& cfg, std::string_view name);

// Everything the retrieval stages share: prepared in-scope documents, their
// token blocks, one per-document index sliced out of the persisted global
// index, and the generated queries.
struct RetrievalBundle {
    std::vector<Document> docs;
    std::map<std::string, std::vector<TokenBlock>> blocks;
    std::map<std::string, VectorIndex> doc_indexes;
    std::map<EntityKind, Query> queries;
};

std::vector<Document> read_corpus_artifact(const PipelineConfig& cfg,
                                           bool in_scope_only = true);
std::map<EntityKind, Query> read_queries_artifact(const PipelineConfig& cfg);
RetrievalBundle load_retrieval_bundle(const PipelineConfig& cfg);

// Retrieval + prompt rendering for every (in-scope document, entity kind),
// ordered by (doc_id, kind). This is exactly what `extract --method llm`
// sends to the model, which lets fixture generators key responses by prompt
// hash.
std::vector<PromptJob> build_all_prompt_jobs(const PipelineConfig& cfg);

StageResult run_ingest(const PipelineConfig& cfg);
StageResult run_segment(const PipelineConfig& cfg);
StageResult run_index_build(const PipelineConfig& cfg);
StageResult run_query_gen(const PipelineConfig& cfg);
StageResult run_extract(const PipelineConfig& cfg, ExtractionMethod method);
StageResult run_label_assist(const PipelineConfig& cfg, ExtractionMethod method);
StageResult run_eval(const PipelineConfig& cfg,
                     const std::optional<std::filesystem::path>& preds_override,
                     bool seg_qa);
StageResult run_bench_hallucination(
    const PipelineConfig& cfg,
    const std::optional<std::filesystem::path>& negatives_override);
StageResult run_stats(const PipelineConfig& cfg,
                      const std::optional<std::filesystem::path>& preds_override,
                      const std::optional<std::filesystem::path>& chart_path);

}  // namespace legalex
