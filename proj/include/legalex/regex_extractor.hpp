#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "legalex/entities.hpp"

namespace legalex {

// The percent-value pattern as the source method states it, with its
// unescaped dot matching any character. The corrected variant escapes the dot
// and sits behind ExtractorConfig::corrected_percent_pattern.
inline constexpr const char* kPercentValuePattern = R"((\d+(?:,\d+)?(?:.\d+)?)\s*%)";
inline constexpr const char* kPercentValuePatternCorrected = R"((\d+(?:,\d+)?(?:\.\d+)?)\s*%)";
inline constexpr const char* kAmountPattern = R"(\$\s*(\d(?:[\d.,]*\d)?))";

struct KeywordConfig {
    std::vector<std::string> physical{"física", "físico"};
    std::vector<std::string> psychological{"psicológica", "psicológico", "psíquica"};
    std::vector<std::string> moral{"daño moral"};
};

struct ExtractorConfig {
    bool corrected_percent_pattern = false;
};

// Picks the disability kind whose keywords appear (case-insensitive) in the
// segment. Physical and psychological together mean psychophysical; no match
// means no disability entity here.
std::optional<EntityKind> classify_disability(std::string_view segment_text,
                                              const KeywordConfig& keywords);

// Percentage values in order of appearance, comma as decimal separator.
// Unparseable or zero captures are skipped with a warning; values above 100
// are kept but flagged.
std::vector<double> extract_percentages(std::string_view segment_text,
                                        const ExtractorConfig& cfg = {},
                                        std::vector<std::string>* warnings = nullptr);

// Amounts following a dollar sign, Argentine normalization
// ("$1.234.567,89" -> 1234567.89), order preserved.
std::vector<double> extract_amounts(std::string_view segment_text,
                                    std::vector<std::string>* warnings = nullptr);

// The single-segment baseline: take the first percent-window segment, read
// the disability kind from its keywords, and pair the first percentage with
// the first amount. Moral damage comes from the first segment matching the
// moral keywords, amounts only.
std::vector<Extraction> regex_extract(const Document& doc, const SegmenterConfig& seg_cfg,
                                      const KeywordConfig& keywords,
                                      const ExtractorConfig& cfg = {},
                                      std::vector<std::string>* warnings = nullptr);

}  // namespace legalex
