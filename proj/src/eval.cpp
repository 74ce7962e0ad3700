#include "legalex/eval.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <regex>
#include <stdexcept>
#include <string>
#include <utility>

#include "legalex/llm_extractor.hpp"
#include "legalex/numeric.hpp"

namespace legalex {

namespace {

bool is_parse_failure(const Extraction& pred) {
    return pred.error && pred.error->rfind(kParseFailurePrefix, 0) == 0;
}

bool field_matches(const std::optional<double>& gold, const std::optional<double>& pred,
                   double tolerance) {
    if (!gold) return !pred;
    return pred && std::abs(*pred - *gold) <= tolerance;
}

bool prediction_correct(const Extraction& pred, const LabeledSample& gold,
                        double tolerance) {
    return field_matches(gold.gold_percentage, pred.percentage, tolerance) &&
           field_matches(gold.gold_amount, pred.amount, tolerance);
}

using JoinKey = std::pair<std::string, EntityKind>;

std::map<JoinKey, const Extraction*> join_predictions(const std::vector<Extraction>& preds) {
    std::map<JoinKey, const Extraction*> joined;
    for (const Extraction& pred : preds) {
        auto [it, inserted] = joined.emplace(JoinKey{pred.doc_id, pred.kind}, &pred);
        if (!inserted)
            throw std::invalid_argument("duplicate prediction for (" + pred.doc_id + ", " +
                                        entity_kind_name(pred.kind) + ")");
    }
    return joined;
}

}  // namespace

std::vector<double> numeric_literals(std::string_view text) {
    // Maximal digit runs with optional . or , groups; "2015" comes out whole,
    // never as an embedded "15".
    static const std::regex literal(R"(\d+(?:[.,]\d+)*)");
    std::vector<double> values;
    for (std::cregex_iterator it(text.data(), text.data() + text.size(), literal), end;
         it != end; ++it) {
        if (auto value = parse_spanish_number(it->str())) values.push_back(*value);
    }
    return values;
}

bool gold_values_present(const LabeledSample& sample, const std::vector<Segment>& segments,
                         double tolerance) {
    if (!sample.gold_percentage && !sample.gold_amount) return true;
    std::vector<double> literals;
    for (const Segment& segment : segments) {
        std::vector<double> found = numeric_literals(segment.text);
        literals.insert(literals.end(), found.begin(), found.end());
    }
    auto occurs = [&](double gold) {
        return std::any_of(literals.begin(), literals.end(),
                           [&](double v) { return std::abs(v - gold) <= tolerance; });
    };
    if (sample.gold_percentage && !occurs(*sample.gold_percentage)) return false;
    if (sample.gold_amount && !occurs(*sample.gold_amount)) return false;
    return true;
}

void compute_presence(std::vector<LabeledSample>& samples, double tolerance) {
    for (LabeledSample& sample : samples)
        sample.entity_present_in_segments =
            gold_values_present(sample, sample.offered_segments, tolerance);
}

std::vector<LabeledSample> filter_dataset2(const std::vector<LabeledSample>& samples) {
    std::vector<LabeledSample> kept;
    std::copy_if(samples.begin(), samples.end(), std::back_inserter(kept),
                 [](const LabeledSample& s) { return s.entity_present_in_segments; });
    return kept;
}

double segmentation_qa(const std::vector<LabeledSample>& samples,
                       const std::function<std::vector<Segment>(const LabeledSample&)>& retriever,
                       double tolerance) {
    if (samples.empty())
        throw std::invalid_argument("segmentation_qa requires at least one sample");
    std::size_t hits = 0;
    for (const LabeledSample& sample : samples)
        if (gold_values_present(sample, retriever(sample), tolerance)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

EvalReport score_extractions(const std::vector<Extraction>& preds,
                             const std::vector<LabeledSample>& gold, double tolerance,
                             std::vector<std::string>* warnings) {
    std::map<JoinKey, const Extraction*> joined = join_predictions(preds);

    EvalReport report;
    std::map<JoinKey, bool> seen_gold;
    std::size_t n_with_flag = 0;
    std::size_t n_flagged = 0;
    for (const LabeledSample& sample : gold) {
        if (!seen_gold.emplace(JoinKey{sample.doc_id, sample.kind}, true).second)
            throw std::invalid_argument("duplicate gold sample for (" + sample.doc_id +
                                        ", " + entity_kind_name(sample.kind) + ")");
        const bool gold_present = sample.gold_percentage || sample.gold_amount;
        KindReport& kind_report = report.per_kind[sample.kind];
        ++report.n_samples;
        ++kind_report.n_samples;
        if (gold_present) {
            ++report.n_gold_present;
            ++kind_report.n_gold_present;
        }

        auto it = joined.find(JoinKey{sample.doc_id, sample.kind});
        if (it == joined.end()) {
            if (warnings)
                warnings->push_back("no prediction for (" + sample.doc_id + ", " +
                                    entity_kind_name(sample.kind) + ")");
            continue;
        }
        const Extraction& pred = *it->second;
        it->second = nullptr;  // mark consumed

        if (pred.flagged_hallucination) {
            ++n_with_flag;
            if (*pred.flagged_hallucination) ++n_flagged;
        }
        if (is_parse_failure(pred)) {
            ++report.n_parse_failures;
            ++kind_report.n_parse_failures;
            continue;
        }
        if (!pred.answered()) {
            if (pred.empty() && !gold_present) ++report.n_empty_correct;
            continue;
        }
        ++report.n_answered;
        ++kind_report.n_answered;
        if (prediction_correct(pred, sample, tolerance)) {
            ++report.n_correct;
            ++kind_report.n_correct;
        }
    }

    if (warnings)
        for (const auto& [key, pred] : joined)
            if (pred)
                warnings->push_back("prediction without gold for (" + key.first + ", " +
                                    entity_kind_name(key.second) + "), ignored");

    report.accuracy_defined = report.n_answered > 0;
    report.accuracy = report.accuracy_defined ? static_cast<double>(report.n_correct) /
                                                    static_cast<double>(report.n_answered)
                                              : 0.0;
    report.recall = report.n_gold_present > 0
                        ? static_cast<double>(report.n_correct) /
                              static_cast<double>(report.n_gold_present)
                        : 0.0;
    for (auto& [kind, kr] : report.per_kind) {
        kr.accuracy = kr.n_answered > 0 ? static_cast<double>(kr.n_correct) /
                                              static_cast<double>(kr.n_answered)
                                        : 0.0;
        kr.recall = kr.n_gold_present > 0 ? static_cast<double>(kr.n_correct) /
                                                static_cast<double>(kr.n_gold_present)
                                          : 0.0;
    }
    if (n_with_flag > 0)
        report.hallucination_rate =
            static_cast<double>(n_flagged) / static_cast<double>(n_with_flag);

    // c/a >= c/g whenever a <= g: the conservative-extractor ordering is an
    // arithmetic consequence of the definitions, so it must hold here.
    assert(!(report.n_answered <= report.n_gold_present && report.accuracy_defined) ||
           report.recall <= report.accuracy + 1e-12);
    return report;
}

double hallucination_benchmark(
    const std::vector<NegativeGroup>& negatives,
    const std::function<Extraction(const NegativeGroup&)>& extractor) {
    if (negatives.empty())
        throw std::invalid_argument("hallucination_benchmark requires negative segments");
    std::size_t invented = 0;
    for (const NegativeGroup& group : negatives)
        if (extractor(group).answered()) ++invented;
    return static_cast<double>(invented) / static_cast<double>(negatives.size());
}

std::vector<SweepRow> threshold_sweep(const std::vector<Extraction>& preds,
                                      const std::vector<LabeledSample>& gold,
                                      const std::vector<double>& p_u_grid,
                                      double tolerance) {
    std::map<JoinKey, const LabeledSample*> gold_by_key;
    for (const LabeledSample& sample : gold)
        gold_by_key[JoinKey{sample.doc_id, sample.kind}] = &sample;

    struct Run {
        double min_prob;
        bool correct;
    };
    std::vector<Run> runs;
    for (const Extraction& pred : preds) {
        if (!pred.answered() || !pred.min_prob) continue;
        auto it = gold_by_key.find(JoinKey{pred.doc_id, pred.kind});
        if (it == gold_by_key.end()) continue;
        runs.push_back({*pred.min_prob, prediction_correct(pred, *it->second, tolerance)});
    }

    std::vector<SweepRow> table;
    table.reserve(p_u_grid.size());
    for (double p_u : p_u_grid) {
        SweepRow row;
        row.p_u = p_u;
        std::size_t n_correct = 0, n_incorrect = 0;
        std::size_t flagged_correct = 0, flagged_incorrect = 0;
        for (const Run& run : runs) {
            const bool flagged = run.min_prob < p_u;
            if (flagged) ++row.n_flagged;
            if (run.correct) {
                ++n_correct;
                if (flagged) ++flagged_correct;
            } else {
                ++n_incorrect;
                if (flagged) ++flagged_incorrect;
            }
        }
        if (!runs.empty())
            row.flagged_rate =
                static_cast<double>(row.n_flagged) / static_cast<double>(runs.size());
        if (n_correct > 0)
            row.flagged_among_correct =
                static_cast<double>(flagged_correct) / static_cast<double>(n_correct);
        if (n_incorrect > 0)
            row.flagged_among_incorrect =
                static_cast<double>(flagged_incorrect) / static_cast<double>(n_incorrect);
        table.push_back(row);
    }
    return table;
}

}  // namespace legalex
