#include "legalex/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "legalex/text_util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace legalex {

namespace {

std::optional<std::string> read_file(const fs::path& path, std::string& error) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        error = "cannot open file";
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        error = "read failure";
        return std::nullopt;
    }
    return buf.str();
}

void load_one(const std::string& id, const fs::path& path, std::optional<Date> date,
              std::optional<std::string> jurisdiction, CorpusLoadResult& out) {
    std::string error;
    auto text = read_file(path, error);
    if (!text) {
        out.errors.push_back({path.string(), error});
        return;
    }
    std::size_t bad = utf8_find_invalid(*text);
    if (bad != std::string::npos) {
        out.errors.push_back(
            {path.string(), "invalid UTF-8 at byte offset " + std::to_string(bad)});
        return;
    }
    Document doc;
    doc.id = id;
    doc.source_path = path.string();
    doc.raw_text = std::move(*text);
    doc.ruling_date = date;
    doc.jurisdiction = std::move(jurisdiction);
    out.documents.push_back(std::move(doc));
}

void load_manifest(const fs::path& manifest, CorpusLoadResult& out) {
    std::ifstream in(manifest);
    if (!in) throw std::runtime_error("cannot open manifest: " + manifest.string());
    const fs::path base = manifest.parent_path();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json entry = json::parse(line, nullptr, false);
        if (entry.is_discarded() || !entry.is_object() || !entry.contains("id") ||
            !entry.contains("path")) {
            out.errors.push_back({manifest.string() + ":" + std::to_string(line_no),
                                  "malformed manifest entry"});
            continue;
        }
        std::optional<Date> date;
        if (entry.contains("ruling_date") && entry["ruling_date"].is_string()) {
            date = parse_date(entry["ruling_date"].get<std::string>());
            if (!date) {
                out.errors.push_back({entry["id"].get<std::string>(),
                                      "bad ruling_date: " + entry["ruling_date"].dump()});
            }
        }
        std::optional<std::string> jurisdiction;
        if (entry.contains("jurisdiction") && entry["jurisdiction"].is_string())
            jurisdiction = entry["jurisdiction"].get<std::string>();
        fs::path p = entry["path"].get<std::string>();
        if (p.is_relative()) p = base / p;
        load_one(entry["id"].get<std::string>(), p, date, std::move(jurisdiction), out);
    }
}

}  // namespace

CorpusLoadResult load_corpus(const std::string& root) {
    CorpusLoadResult out;
    fs::path path(root);
    if (!fs::exists(path)) throw std::runtime_error("corpus root does not exist: " + root);

    if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
            if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
            load_one(entry.path().stem().string(), entry.path(), std::nullopt, std::nullopt,
                     out);
        }
    } else {
        load_manifest(path, out);
    }

    std::sort(out.documents.begin(), out.documents.end(),
              [](const Document& a, const Document& b) { return a.id < b.id; });
    // duplicate ids degrade to per-document errors, first occurrence wins
    std::vector<Document> unique;
    unique.reserve(out.documents.size());
    for (auto& doc : out.documents) {
        if (!unique.empty() && unique.back().id == doc.id)
            out.errors.push_back({doc.source_path, "duplicate document id '" + doc.id + "'"});
        else
            unique.push_back(std::move(doc));
    }
    out.documents = std::move(unique);
    std::sort(out.errors.begin(), out.errors.end(),
              [](const ErrorRecord& a, const ErrorRecord& b) { return a.subject < b.subject; });
    return out;
}

CleaningRules::CleaningRules(const std::vector<std::string>& patterns) : patterns_(patterns) {
    compiled_.reserve(patterns.size());
    for (const auto& p : patterns) {
        try {
            compiled_.emplace_back(p, std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            throw std::runtime_error("invalid header-code pattern '" + p + "': " + e.what());
        }
    }
}

std::string clean_text(const std::string& raw, const CleaningRules& rules) {
    static const std::regex newline_run("\n{3,}");
    std::string text = raw;
    // Deleting a match can splice the surrounding text into a fresh match, so
    // iterate to a fixpoint. Replacements only delete, which bounds the loop.
    while (true) {
        std::string pass = text;
        for (const auto& re : rules.compiled()) pass = std::regex_replace(pass, re, "");
        pass = std::regex_replace(pass, newline_run, "\n\n");
        if (pass == text) break;
        text = std::move(pass);
    }
    return text;
}

bool classify_scope(const Document& doc, const ScopeFilter& filter) {
    // Patterns match case-insensitively; Latin-1 accents are folded on both
    // sides so "ACCIDENTE"/"Tránsito" behave as expected for Spanish headers.
    const std::string header = to_lower(doc.header);
    auto matches = [&](const std::string& pattern) {
        std::regex re(to_lower(pattern), std::regex::ECMAScript | std::regex::icase);
        return std::regex_search(header, re);
    };
    for (const auto& p : filter.must_patterns)
        if (!matches(p)) return false;
    for (const auto& p : filter.must_not_patterns)
        if (matches(p)) return false;
    return true;
}

void prepare_document(Document& doc, const CleaningRules& rules, const ScopeFilter& filter,
                      std::size_t header_chars) {
    doc.cleaned_text = clean_text(doc.raw_text, rules);
    doc.header = doc.cleaned_text.substr(0, utf8_prefix_bytes(doc.cleaned_text, header_chars));
    doc.in_scope = classify_scope(doc, filter);
}

}  // namespace legalex
