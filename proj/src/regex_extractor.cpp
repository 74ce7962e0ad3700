#include "legalex/regex_extractor.hpp"

#include <regex>

#include "legalex/numeric.hpp"
#include "legalex/text_util.hpp"

namespace legalex {

namespace {

bool any_keyword(std::string_view text, const std::vector<std::string>& keywords) {
    for (const auto& kw : keywords)
        if (!kw.empty() && contains_ci(text, kw)) return true;
    return false;
}

}  // namespace

std::optional<EntityKind> classify_disability(std::string_view segment_text,
                                              const KeywordConfig& keywords) {
    const bool physical = any_keyword(segment_text, keywords.physical);
    const bool psychological = any_keyword(segment_text, keywords.psychological);
    if (physical && psychological) return EntityKind::PsychophysicalDisability;
    if (physical) return EntityKind::PhysicalDisability;
    if (psychological) return EntityKind::PsychologicalDisability;
    return std::nullopt;
}

std::vector<double> extract_percentages(std::string_view segment_text,
                                        const ExtractorConfig& cfg,
                                        std::vector<std::string>* warnings) {
    static const std::regex verbatim(kPercentValuePattern);
    static const std::regex corrected(kPercentValuePatternCorrected);
    const std::regex& re = cfg.corrected_percent_pattern ? corrected : verbatim;

    std::vector<double> values;
    const std::string text(segment_text);
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
         it != std::sregex_iterator(); ++it) {
        auto value = parse_spanish_number((*it)[1].str(), warnings);
        if (!value) continue;  // warning already recorded
        if (*value == 0.0) {
            if (warnings) warnings->push_back("zero percentage dropped: '" + it->str() + "'");
            continue;
        }
        if (*value > 100.0 && warnings)
            warnings->push_back("percentage above 100: " + format_double(*value));
        values.push_back(*value);
    }
    return values;
}

std::vector<double> extract_amounts(std::string_view segment_text,
                                    std::vector<std::string>* warnings) {
    static const std::regex re(kAmountPattern);
    std::vector<double> values;
    const std::string text(segment_text);
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
         it != std::sregex_iterator(); ++it) {
        auto value = parse_spanish_number((*it)[1].str(), warnings);
        if (value) values.push_back(*value);
    }
    return values;
}

std::vector<Extraction> regex_extract(const Document& doc, const SegmenterConfig& seg_cfg,
                                      const KeywordConfig& keywords, const ExtractorConfig& cfg,
                                      std::vector<std::string>* warnings) {
    std::vector<Extraction> out;
    const auto segments = regex_percent_segments(doc, seg_cfg);
    if (segments.empty()) return out;

    // the baseline predefines a single relevant segment: the first window
    const Segment& first = segments.front();
    if (auto kind = classify_disability(first.text, keywords)) {
        const auto percentages = extract_percentages(first.text, cfg, warnings);
        const auto amounts = extract_amounts(first.text, warnings);
        Extraction extraction;
        extraction.doc_id = doc.id;
        extraction.kind = *kind;
        extraction.method = ExtractionMethod::Regex;
        if (!percentages.empty()) extraction.percentage = percentages.front();
        if (!amounts.empty()) extraction.amount = amounts.front();
        extraction.provenance.push_back(first);
        if (!extraction.empty()) out.push_back(std::move(extraction));
    }

    // moral damage: first window naming it, amounts only
    for (const auto& segment : segments) {
        if (!any_keyword(segment.text, keywords.moral)) continue;
        const auto amounts = extract_amounts(segment.text, warnings);
        if (amounts.empty()) break;
        Extraction extraction;
        extraction.doc_id = doc.id;
        extraction.kind = EntityKind::MoralDamage;
        extraction.method = ExtractionMethod::Regex;
        extraction.amount = amounts.front();
        extraction.provenance.push_back(segment);
        out.push_back(std::move(extraction));
        break;
    }
    return out;
}

}  // namespace legalex
