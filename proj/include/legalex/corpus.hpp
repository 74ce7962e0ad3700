#pragma once

#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "legalex/dates.hpp"

namespace legalex {

/// One first-instance ruling. `cleaned_text` and `header` stay empty until the
/// cleaning step runs; `header` is always a prefix slice of `cleaned_text`.
struct Document {
    std::string id;
    std::string source_path;
    std::string raw_text;
    std::string cleaned_text;
    std::string header;
    bool in_scope = true;
    std::optional<Date> ruling_date;
    std::optional<std::string> jurisdiction;
};

struct ErrorRecord {
    std::string subject;  // file path, doc id, or entity kind
    std::string message;
};

struct CorpusLoadResult {
    std::vector<Document> documents;  // ordered by id, lexicographic
    std::vector<ErrorRecord> errors;
};

// Loads raw ruling texts. `root` is either a directory of .txt files (the file
// stem becomes the document id) or a JSONL manifest with one object per
// document: {"id", "path", "ruling_date", "jurisdiction"}. Unreadable or
// non-UTF-8 files become per-file error records, never a global abort.
CorpusLoadResult load_corpus(const std::string& root);

// Compiled header-code removal rules. Compiles eagerly so a bad pattern is a
// configuration error at load time.
class CleaningRules {
  public:
    explicit CleaningRules(const std::vector<std::string>& patterns);

    const std::vector<std::string>& patterns() const { return patterns_; }
    const std::vector<std::regex>& compiled() const { return compiled_; }

  private:
    std::vector<std::string> patterns_;
    std::vector<std::regex> compiled_;
};

// Removes every pattern match and collapses runs of 3+ newlines to 2. Runs to
// a fixpoint so the operation is idempotent even when deletions splice new
// matches together.
std::string clean_text(const std::string& raw, const CleaningRules& rules);

struct ScopeFilter {
    std::vector<std::string> must_patterns;      // case-insensitive
    std::vector<std::string> must_not_patterns;  // case-insensitive

    bool empty() const { return must_patterns.empty() && must_not_patterns.empty(); }
};

/// True iff every must pattern matches the header and no must-not pattern does.
bool classify_scope(const Document& doc, const ScopeFilter& filter);

// Runs clean + header slice + scope classification over a document in place.
// `header_chars` counts code points, not bytes.
void prepare_document(Document& doc, const CleaningRules& rules, const ScopeFilter& filter,
                      std::size_t header_chars = 2000);

}  // namespace legalex
