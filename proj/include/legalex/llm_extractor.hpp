#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "legalex/corpus.hpp"
#include "legalex/entities.hpp"
#include "legalex/llm_client.hpp"
#include "legalex/retrieval.hpp"

namespace legalex {

// Error strings beginning with this prefix mark responses that could not be
// turned into an extraction; the evaluator counts them as unanswered.
inline constexpr const char* kParseFailurePrefix = "ParseFailure";

// Fixed separator line placed between segments inside a rendered prompt.
inline constexpr const char* kSegmentDelimiter = "\n-----\n";

// Prompt skeleton with {entity_kind_instruction} and {segments} placeholders
// plus the per-kind instruction snippets. Both live in config; the default
// below asks for a single JSON object with "percentage" and "amount" keys.
struct PromptTemplate {
    std::string text;
    std::map<EntityKind, std::string> instructions;
};

PromptTemplate default_prompt_template();

struct HallucinationConfig {
    // Generations whose minimum token probability falls below p_u get flagged.
    // The flag is advisory: extractions are recorded either way.
    double p_u = 0.0;
};

// Substitutes both placeholders. Segments are concatenated in descending
// score order separated by kSegmentDelimiter. Throws std::invalid_argument on
// an empty segment list, std::runtime_error on an unknown placeholder marker
// or a kind with no instruction.
std::string render_prompt(const PromptTemplate& tpl, EntityKind kind,
                          const std::vector<Segment>& segments);

// Reads the first JSON object embedded anywhere in the response text (models
// like to wrap it in prose). Numeric strings go through the Argentine numeral
// rules; nulls mean absent; MoralDamage never keeps a percentage. Responses
// without a JSON object, or with negative / non-numeric values, come back as
// an error starting with kParseFailurePrefix. Only kind and the value fields
// are filled in; doc_id, method and provenance stay the caller's business.
Extraction parse_response(const std::string& text, EntityKind kind,
                          std::vector<std::string>* warnings = nullptr);

// True iff min(token_probs) < cfg.p_u. Throws std::invalid_argument on empty
// probs; callers skip detection instead of calling with nothing.
bool detect_hallucination(const std::vector<double>& token_probs,
                          const HallucinationConfig& cfg);

// What extract_entities needs to turn per-kind queries into scored segments
// for one document.
struct RetrievalContext {
    const VectorIndex* index = nullptr;  // index over this document's blocks
    std::map<EntityKind, Query> queries;
    EmbedderSpec embedder;
    std::size_t k = 4;
    std::size_t expansion_radius = 1;
};

/// One rendered model call waiting to happen. Jobs that failed before the
/// model (no query, no segments, render error) carry `error` instead.
struct PromptJob {
    std::string doc_id;
    EntityKind kind = EntityKind::PhysicalDisability;
    std::string prompt;
    std::vector<Segment> segments;
    std::optional<std::string> error;
};

// Retrieval + rendering for every kind, no model calls yet. Duplicate kinds
// are processed once; output is ordered by (doc_id, kind). Exposed separately
// so mock fixtures can be keyed by the exact prompts the extractor will send.
std::vector<PromptJob> build_prompt_jobs(const Document& doc,
                                         const std::vector<TokenBlock>& doc_blocks,
                                         const std::vector<EntityKind>& kinds,
                                         const RetrievalContext& ctx,
                                         const PromptTemplate& tpl);

// Calls the model for each job, parses, and annotates with token
// probabilities and the hallucination flag. Per-job failures become error
// records instead of aborting the batch; job order is preserved.
std::vector<Extraction> run_prompt_jobs(const std::vector<PromptJob>& jobs,
                                        const LlmClient& client,
                                        const HallucinationConfig& hall_cfg,
                                        std::vector<std::string>* warnings = nullptr);

// The per-document RAG pass: build_prompt_jobs composed with run_prompt_jobs.
std::vector<Extraction> extract_entities(const Document& doc,
                                         const std::vector<TokenBlock>& doc_blocks,
                                         const std::vector<EntityKind>& kinds,
                                         const RetrievalContext& ctx,
                                         const PromptTemplate& tpl,
                                         const LlmClient& client,
                                         const HallucinationConfig& hall_cfg,
                                         std::vector<std::string>* warnings = nullptr);

}  // namespace legalex
