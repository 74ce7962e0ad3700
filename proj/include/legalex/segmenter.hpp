#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "legalex/corpus.hpp"

namespace legalex {

struct TokenSpan {
    std::size_t begin = 0;  // byte offsets
    std::size_t end = 0;

    bool operator==(const TokenSpan&) const = default;
};

/// Whitespace tokenizer: maximal runs of non-whitespace bytes. Punctuation
/// stays attached to its word. Spans index into the input text.
std::vector<TokenSpan> tokenize(std::string_view text);

struct TokenBlock {
    std::string doc_id;
    std::size_t index = 0;
    std::size_t char_begin = 0;  // first byte of first token
    std::size_t char_end = 0;    // one past last byte of last token
    std::size_t token_count = 0;
    std::string text;
};

enum class SegmentOrigin { RegexWindow, ExpandedBlock };

struct Segment {
    std::string doc_id;
    std::string text;  // always a verbatim slice of cleaned_text
    std::size_t char_begin = 0;
    std::size_t char_end = 0;
    SegmentOrigin origin = SegmentOrigin::RegexWindow;
    std::optional<std::size_t> center_block_index;  // ExpandedBlock only
    std::optional<double> score;                    // cosine similarity, when retrieved
};

struct SegmenterConfig {
    std::size_t block_size = 120;        // tokens per block
    std::size_t expansion_radius = 1;    // neighbour blocks on each side
    std::size_t regex_window_chars = 500;
    std::string percent_pattern = R"([\w\d\s\n,.]{0,1}%)";
    bool merge_windows = true;
};

// Partitions the document's token stream into consecutive runs of
// `block_size` tokens; the final block keeps the remainder. Concatenating the
// block token streams reconstructs tokenize(cleaned_text) exactly.
std::vector<TokenBlock> block_split(const Document& doc, const SegmenterConfig& cfg);

// One window of `regex_window_chars` characters on each side of every percent
// match, clamped to the document and snapped outward to UTF-8 boundaries.
// Overlapping windows merge into a single segment unless cfg.merge_windows is
// off. Results are in ascending char order.
std::vector<Segment> regex_percent_segments(const Document& doc, const SegmenterConfig& cfg);

// Concatenates block i with up to `radius` neighbours on each side into one
// segment sliced verbatim from cleaned_text (inter-block whitespace included).
Segment expand_block(std::string_view cleaned_text, const std::vector<TokenBlock>& blocks,
                     std::size_t i, std::size_t radius);

}  // namespace legalex
