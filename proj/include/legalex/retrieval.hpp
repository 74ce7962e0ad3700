#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "legalex/embedder.hpp"
#include "legalex/entities.hpp"
#include "legalex/segmenter.hpp"

namespace legalex {

struct BlockKey {
    std::string doc_id;
    std::size_t block_index = 0;

    auto operator<=>(const BlockKey&) const = default;
};

struct SearchHit {
    BlockKey key;
    double score = 0.0;  // cosine similarity in [-1, 1]
};

// Exact flat cosine index. Vectors are unit-normalized at insertion so cosine
// reduces to a dot product; a linear scan over hundreds of documents is both
// fast enough and exact. Immutable once built, safe for concurrent searches.
class VectorIndex {
  public:
    VectorIndex(std::size_t dim, std::string embedder_id);

    void add(BlockKey key, const std::vector<double>& vector);

    /// Exact top-k by cosine similarity, descending; exact score ties break by
    /// ascending block key. Empty index yields an empty result.
    std::vector<SearchHit> search(const std::vector<double>& query, std::size_t k) const;

    std::size_t dim() const { return dim_; }
    const std::string& embedder_id() const { return embedder_id_; }
    std::size_t size() const { return keys_.size(); }
    const std::vector<BlockKey>& keys() const { return keys_; }
    const std::vector<double>& vector_at(std::size_t i) const { return vectors_[i]; }

  private:
    std::size_t dim_;
    std::string embedder_id_;
    std::vector<BlockKey> keys_;
    std::set<BlockKey> key_set_;  // uniqueness guard
    std::vector<std::vector<double>> vectors_;  // unit norm
};

struct TermStats {
    std::size_t df = 0;
    double idf = 0.0;  // ln((1 + n_docs) / (1 + df)) + 1
};

struct TfIdfModel {
    std::map<std::string, TermStats> vocabulary;
    std::size_t n_docs = 0;
};

// Builds document frequencies treating each exemplar block as one document.
// Terms are lowercased whitespace tokens; terms shorter than 2 characters are
// dropped. Throws when every block is empty.
TfIdfModel build_tfidf(const std::vector<std::string>& exemplar_blocks);

struct WeightedTerm {
    std::string term;
    double weight = 0.0;
};

struct Query {
    EntityKind kind = EntityKind::PhysicalDisability;
    std::string text;
    std::vector<WeightedTerm> terms;  // sorted by weight descending
};

// Scores every vocabulary term by total tf across the exemplars times idf and
// keeps the top_m (ties break lexicographically); the query text is the kept
// terms joined by single spaces.
Query make_query(EntityKind kind, const TfIdfModel& model,
                 const std::vector<std::string>& exemplars, std::size_t top_m);

// Embeds the query text, searches the per-document index, and expands each
// hit into a context segment. Segments with identical char spans are deduped
// (best score wins); results keep descending score order.
std::vector<Segment> retrieve_segments(const Document& doc,
                                       const std::vector<TokenBlock>& doc_blocks,
                                       const VectorIndex& index, const Query& query,
                                       const EmbedderSpec& embedder, std::size_t k,
                                       std::size_t radius);

}  // namespace legalex
