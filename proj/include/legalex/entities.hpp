#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "legalex/segmenter.hpp"

namespace legalex {

// Table-driven entity set: the three disability kinds carry a percentage and
// an amount; moral damage carries an amount only.
enum class EntityKind {
    PhysicalDisability,
    PsychologicalDisability,
    PsychophysicalDisability,
    MoralDamage,
};

constexpr EntityKind kAllEntityKinds[] = {
    EntityKind::PhysicalDisability,
    EntityKind::PsychologicalDisability,
    EntityKind::PsychophysicalDisability,
    EntityKind::MoralDamage,
};

std::string entity_kind_name(EntityKind kind);
std::optional<EntityKind> parse_entity_kind(std::string_view name);

inline bool carries_percentage(EntityKind kind) { return kind != EntityKind::MoralDamage; }

enum class ExtractionMethod { Regex, Llm };

std::string method_name(ExtractionMethod method);
std::optional<ExtractionMethod> parse_method(std::string_view name);

/// One extraction result. `error` marks parse failures and per-kind faults;
/// an errored record never carries values.
struct Extraction {
    std::string doc_id;
    EntityKind kind = EntityKind::PhysicalDisability;
    std::optional<double> percentage;  // absent for MoralDamage
    std::optional<double> amount;      // ARS
    ExtractionMethod method = ExtractionMethod::Regex;
    std::vector<Segment> provenance;
    std::optional<std::vector<double>> token_probs;
    std::optional<double> min_prob;                // min of token_probs
    std::optional<bool> flagged_hallucination;     // set only when probs exist
    std::optional<std::string> error;

    bool empty() const { return !percentage && !amount && !error; }
    bool answered() const { return !error && (percentage || amount); }
};

}  // namespace legalex
