#include "legalex/segmenter.hpp"

#include <algorithm>
#include <regex>
#include <stdexcept>

#include "legalex/text_util.hpp"

namespace legalex {

std::vector<TokenSpan> tokenize(std::string_view text) {
    std::vector<TokenSpan> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t ws = whitespace_length_at(text, i);
        if (ws > 0) {
            i += ws;
            continue;
        }
        std::size_t begin = i;
        while (i < text.size() && whitespace_length_at(text, i) == 0) ++i;
        tokens.push_back({begin, i});
    }
    return tokens;
}

std::vector<TokenBlock> block_split(const Document& doc, const SegmenterConfig& cfg) {
    if (cfg.block_size == 0) throw std::invalid_argument("block_size must be >= 1");
    std::vector<TokenBlock> blocks;
    const auto tokens = tokenize(doc.cleaned_text);
    for (std::size_t start = 0; start < tokens.size(); start += cfg.block_size) {
        std::size_t count = std::min(cfg.block_size, tokens.size() - start);
        TokenBlock block;
        block.doc_id = doc.id;
        block.index = blocks.size();
        block.char_begin = tokens[start].begin;
        block.char_end = tokens[start + count - 1].end;
        block.token_count = count;
        block.text = doc.cleaned_text.substr(block.char_begin, block.char_end - block.char_begin);
        blocks.push_back(std::move(block));
    }
    return blocks;
}

std::vector<Segment> regex_percent_segments(const Document& doc, const SegmenterConfig& cfg) {
    std::regex pattern;
    try {
        pattern = std::regex(cfg.percent_pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
        throw std::runtime_error("invalid percent pattern '" + cfg.percent_pattern +
                                 "': " + e.what());
    }

    const std::string& text = doc.cleaned_text;
    const std::size_t window = cfg.regex_window_chars;
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), pattern);
         it != std::sregex_iterator(); ++it) {
        std::size_t pos = static_cast<std::size_t>(it->position());
        std::size_t begin = pos > window ? pos - window : 0;
        std::size_t end = std::min(text.size(), pos + window);
        // snap outward so the window never splits a code point
        begin = utf8_floor(text, begin);
        end = utf8_ceil(text, end);
        spans.emplace_back(begin, end);
    }

    if (cfg.merge_windows) {
        std::vector<std::pair<std::size_t, std::size_t>> merged;
        for (const auto& span : spans) {
            if (!merged.empty() && span.first <= merged.back().second)
                merged.back().second = std::max(merged.back().second, span.second);
            else
                merged.push_back(span);
        }
        spans = std::move(merged);
    }

    std::vector<Segment> segments;
    segments.reserve(spans.size());
    for (const auto& [begin, end] : spans) {
        Segment seg;
        seg.doc_id = doc.id;
        seg.char_begin = begin;
        seg.char_end = end;
        seg.text = text.substr(begin, end - begin);
        seg.origin = SegmentOrigin::RegexWindow;
        segments.push_back(std::move(seg));
    }
    return segments;
}

Segment expand_block(std::string_view cleaned_text, const std::vector<TokenBlock>& blocks,
                     std::size_t i, std::size_t radius) {
    if (i >= blocks.size()) throw std::out_of_range("block index out of range");
    std::size_t lo = i >= radius ? i - radius : 0;
    std::size_t hi = std::min(blocks.size() - 1, i + radius);
    Segment seg;
    seg.doc_id = blocks[i].doc_id;
    seg.char_begin = blocks[lo].char_begin;
    seg.char_end = blocks[hi].char_end;
    seg.text = std::string(cleaned_text.substr(seg.char_begin, seg.char_end - seg.char_begin));
    seg.origin = SegmentOrigin::ExpandedBlock;
    seg.center_block_index = i;
    return seg;
}

}  // namespace legalex
