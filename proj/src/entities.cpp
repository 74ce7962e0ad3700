#include "legalex/entities.hpp"

namespace legalex {

std::string entity_kind_name(EntityKind kind) {
    switch (kind) {
        case EntityKind::PhysicalDisability: return "physical_disability";
        case EntityKind::PsychologicalDisability: return "psychological_disability";
        case EntityKind::PsychophysicalDisability: return "psychophysical_disability";
        case EntityKind::MoralDamage: return "moral_damage";
    }
    return "unknown";
}

std::optional<EntityKind> parse_entity_kind(std::string_view name) {
    if (name == "physical_disability" || name == "physical") return EntityKind::PhysicalDisability;
    if (name == "psychological_disability" || name == "psychological")
        return EntityKind::PsychologicalDisability;
    if (name == "psychophysical_disability" || name == "psychophysical")
        return EntityKind::PsychophysicalDisability;
    if (name == "moral_damage" || name == "moral") return EntityKind::MoralDamage;
    return std::nullopt;
}

std::string method_name(ExtractionMethod method) {
    return method == ExtractionMethod::Regex ? "regex" : "llm";
}

std::optional<ExtractionMethod> parse_method(std::string_view name) {
    if (name == "regex") return ExtractionMethod::Regex;
    if (name == "llm") return ExtractionMethod::Llm;
    return std::nullopt;
}

}  // namespace legalex
