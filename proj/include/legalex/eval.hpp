#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "legalex/entities.hpp"
#include "legalex/segmenter.hpp"

namespace legalex {

/// One gold-labeled (document, entity kind) pair together with the segments
/// that were offered to the extractor when the label was made.
struct LabeledSample {
    std::string doc_id;
    EntityKind kind = EntityKind::PhysicalDisability;
    std::optional<double> gold_percentage;
    std::optional<double> gold_amount;
    std::vector<Segment> offered_segments;
    bool entity_present_in_segments = false;
};

// All numeric literals in the text (maximal digit runs with optional . or ,
// groups), normalized by the Argentine numeral rules. Unparseable runs are
// skipped.
std::vector<double> numeric_literals(std::string_view text);

// True when every gold-present value of the sample occurs among the numeric
// literals of the segment texts within `tolerance`. A sample with no gold
// values is vacuously present (the right answer — the empty extraction — can
// be produced from any segment).
bool gold_values_present(const LabeledSample& sample, const std::vector<Segment>& segments,
                         double tolerance = 0.01);

// Fills entity_present_in_segments from each sample's own offered_segments.
void compute_presence(std::vector<LabeledSample>& samples, double tolerance = 0.01);

// Keeps the samples whose entities can actually be found in their segments;
// order is preserved and records are untouched.
std::vector<LabeledSample> filter_dataset2(const std::vector<LabeledSample>& samples);

// Fraction of samples whose retrieved segments contain the gold values.
// `retriever` maps a sample to the segments the pipeline would offer for it.
// Throws std::invalid_argument on zero samples.
double segmentation_qa(const std::vector<LabeledSample>& samples,
                       const std::function<std::vector<Segment>(const LabeledSample&)>& retriever,
                       double tolerance = 0.01);

struct KindReport {
    std::size_t n_samples = 0;
    std::size_t n_answered = 0;
    std::size_t n_correct = 0;
    std::size_t n_gold_present = 0;
    std::size_t n_parse_failures = 0;
    double accuracy = 0.0;
    double recall = 0.0;
};

struct EvalReport {
    std::size_t n_samples = 0;
    std::size_t n_answered = 0;        // non-empty, parse-success predictions
    std::size_t n_correct = 0;         // correct among the answered
    std::size_t n_gold_present = 0;    // samples with at least one gold value
    std::size_t n_empty_correct = 0;   // empty gold met by an empty prediction
    std::size_t n_parse_failures = 0;
    double accuracy = 0.0;             // n_correct / n_answered
    double recall = 0.0;               // n_correct / n_gold_present
    bool accuracy_defined = true;      // false when nothing was answered
    std::map<EntityKind, KindReport> per_kind;
    std::optional<double> hallucination_rate;  // flagged share of prob-carrying preds
};

// Joins predictions to gold on (doc_id, kind) and scores them. A prediction
// is correct iff every gold-present field matches within `tolerance` and every
// gold-absent field is absent. Accuracy divides by answered predictions —
// extractors earn accuracy only on the values they commit to — while recall
// divides by gold-present samples. Parse failures are unanswered. Empty
// predictions on empty gold are the desired behavior and are tallied in
// n_empty_correct, outside the accuracy fraction. Throws on duplicate
// (doc_id, kind) predictions; gold without a prediction scores as unanswered
// with a warning, predictions without gold are ignored with a warning.
EvalReport score_extractions(const std::vector<Extraction>& preds,
                             const std::vector<LabeledSample>& gold,
                             double tolerance = 0.01,
                             std::vector<std::string>* warnings = nullptr);

/// Segments verified to not contain a given entity, keyed by the sample they
/// came from.
struct NegativeGroup {
    std::string doc_id;
    EntityKind kind = EntityKind::PhysicalDisability;
    std::vector<Segment> segments;
};

// Runs the extractor over entity-free segments and reports how often it
// invents values anyway: rate = value-carrying extractions / groups. Errored
// runs count in the denominator only. Throws std::invalid_argument on empty
// input.
double hallucination_benchmark(
    const std::vector<NegativeGroup>& negatives,
    const std::function<Extraction(const NegativeGroup&)>& extractor);

struct SweepRow {
    double p_u = 0.0;
    std::size_t n_flagged = 0;
    double flagged_rate = 0.0;             // flagged / preds with probs
    double flagged_among_incorrect = 0.0;  // flagged share of incorrect answers
    double flagged_among_correct = 0.0;    // flagged share of correct answers
};

// Re-evaluates the hallucination flag over a grid of thresholds, splitting by
// correctness against gold. Predictions without token probabilities are
// excluded; shares with an empty denominator report 0.
std::vector<SweepRow> threshold_sweep(const std::vector<Extraction>& preds,
                                      const std::vector<LabeledSample>& gold,
                                      const std::vector<double>& p_u_grid,
                                      double tolerance = 0.01);

}  // namespace legalex
