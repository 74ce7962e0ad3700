#include "legalex/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "legalex/text_util.hpp"

namespace legalex {

namespace {

std::vector<double> normalized(const std::vector<double>& v) {
    double norm2 = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) throw std::invalid_argument("non-finite vector component");
        norm2 += x * x;
    }
    if (norm2 == 0.0) throw std::invalid_argument("zero-norm vector cannot be normalized");
    double inv = 1.0 / std::sqrt(norm2);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * inv;
    return out;
}

std::vector<std::string> tfidf_terms(const std::string& block) {
    std::vector<std::string> terms;
    const std::string lowered = to_lower(block);
    for (const auto& span : tokenize(lowered)) {
        std::string term = lowered.substr(span.begin, span.end - span.begin);
        if (utf8_length(term) < 2) continue;
        terms.push_back(std::move(term));
    }
    return terms;
}

}  // namespace

VectorIndex::VectorIndex(std::size_t dim, std::string embedder_id)
    : dim_(dim), embedder_id_(std::move(embedder_id)) {
    if (dim_ == 0) throw std::invalid_argument("index dim must be >= 1");
}

void VectorIndex::add(BlockKey key, const std::vector<double>& vector) {
    if (vector.size() != dim_)
        throw std::invalid_argument("vector dimension " + std::to_string(vector.size()) +
                                    " does not match index dim " + std::to_string(dim_));
    // Normalize before registering the key so a rejected vector leaves the
    // index untouched.
    std::vector<double> unit = normalized(vector);
    if (!key_set_.insert(key).second)
        throw std::invalid_argument("duplicate block key " + key.doc_id + "#" +
                                    std::to_string(key.block_index));
    keys_.push_back(std::move(key));
    vectors_.push_back(std::move(unit));
}

std::vector<SearchHit> VectorIndex::search(const std::vector<double>& query,
                                           std::size_t k) const {
    if (query.size() != dim_)
        throw std::invalid_argument("query dimension " + std::to_string(query.size()) +
                                    " does not match index dim " + std::to_string(dim_));
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    if (keys_.empty()) return {};

    const std::vector<double> q = normalized(query);
    std::vector<SearchHit> hits;
    hits.reserve(keys_.size());
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) dot += q[j] * vectors_[i][j];
        hits.push_back({keys_[i], dot});
    }
    std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.key < b.key;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

TfIdfModel build_tfidf(const std::vector<std::string>& exemplar_blocks) {
    TfIdfModel model;
    bool any_content = false;
    for (const auto& block : exemplar_blocks) {
        auto terms = tfidf_terms(block);
        if (!terms.empty()) any_content = true;
        std::set<std::string> seen(terms.begin(), terms.end());
        for (const auto& term : seen) model.vocabulary[term].df += 1;
        model.n_docs += 1;
    }
    if (!any_content)
        throw std::invalid_argument("build_tfidf requires at least one non-empty block");
    for (auto& [term, stats] : model.vocabulary)
        stats.idf = std::log(static_cast<double>(1 + model.n_docs) /
                             static_cast<double>(1 + stats.df)) +
                    1.0;
    return model;
}

Query make_query(EntityKind kind, const TfIdfModel& model,
                 const std::vector<std::string>& exemplars, std::size_t top_m) {
    if (top_m == 0) throw std::invalid_argument("top_m must be >= 1");
    if (model.vocabulary.empty()) throw std::invalid_argument("tf-idf vocabulary is empty");

    std::map<std::string, std::size_t> tf;
    for (const auto& exemplar : exemplars)
        for (auto& term : tfidf_terms(exemplar)) tf[term] += 1;

    std::vector<WeightedTerm> scored;
    for (const auto& [term, count] : tf) {
        auto it = model.vocabulary.find(term);
        if (it == model.vocabulary.end()) continue;
        scored.push_back({term, static_cast<double>(count) * it->second.idf});
    }
    if (scored.empty())
        throw std::invalid_argument("no exemplar term appears in the tf-idf vocabulary");

    std::sort(scored.begin(), scored.end(), [](const WeightedTerm& a, const WeightedTerm& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.term < b.term;
    });
    if (scored.size() > top_m) scored.resize(top_m);

    Query query;
    query.kind = kind;
    query.terms = std::move(scored);
    for (std::size_t i = 0; i < query.terms.size(); ++i) {
        if (i > 0) query.text += ' ';
        query.text += query.terms[i].term;
    }
    return query;
}

std::vector<Segment> retrieve_segments(const Document& doc,
                                       const std::vector<TokenBlock>& doc_blocks,
                                       const VectorIndex& index, const Query& query,
                                       const EmbedderSpec& embedder, std::size_t k,
                                       std::size_t radius) {
    if (doc_blocks.empty()) return {};
    const std::vector<double> query_vec = embed_one(query.text, embedder);
    const std::size_t effective_k = std::min(k, index.size());
    if (effective_k == 0) return {};
    const auto hits = index.search(query_vec, effective_k);

    std::vector<Segment> segments;
    std::set<std::pair<std::size_t, std::size_t>> seen_spans;
    for (const auto& hit : hits) {
        if (hit.key.doc_id != doc.id)
            throw std::invalid_argument("index contains foreign document " + hit.key.doc_id);
        Segment seg = expand_block(doc.cleaned_text, doc_blocks, hit.key.block_index, radius);
        seg.score = hit.score;
        auto span = std::make_pair(seg.char_begin, seg.char_end);
        if (!seen_spans.insert(span).second) continue;  // best score already kept
        segments.push_back(std::move(seg));
    }
    return segments;
}

}  // namespace legalex
