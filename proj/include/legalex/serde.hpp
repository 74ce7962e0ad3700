#pragma once

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "legalex/corpus.hpp"
#include "legalex/entities.hpp"
#include "legalex/eval.hpp"
#include "legalex/retrieval.hpp"
#include "legalex/segmenter.hpp"
#include "legalex/stats.hpp"

namespace legalex {

/// First line of every artifact: which stage wrote it, under which config.
struct Provenance {
    std::string artifact;
    std::string config_sha256;
    std::string created_at;  // ISO-8601 UTC
};

// Honors SOURCE_DATE_EPOCH (the reproducible-builds convention) so artifact
// bytes can be pinned across runs; falls back to the current time.
std::string provenance_timestamp();

Provenance make_provenance(std::string artifact, std::string config_sha256);

nlohmann::json to_json_line(const Provenance& p);
std::optional<Provenance> parse_provenance(const nlohmann::json& line);

std::string origin_name(SegmentOrigin origin);
std::optional<SegmentOrigin> parse_origin(std::string_view name);

void to_json(nlohmann::json& j, const Document& doc);
void from_json(const nlohmann::json& j, Document& doc);
void to_json(nlohmann::json& j, const Segment& segment);
void from_json(const nlohmann::json& j, Segment& segment);
void to_json(nlohmann::json& j, const Extraction& extraction);
void from_json(const nlohmann::json& j, Extraction& extraction);
void to_json(nlohmann::json& j, const LabeledSample& sample);
void from_json(const nlohmann::json& j, LabeledSample& sample);
void to_json(nlohmann::json& j, const Query& query);
void from_json(const nlohmann::json& j, Query& query);
void to_json(nlohmann::json& j, const KindReport& report);
void to_json(nlohmann::json& j, const EvalReport& report);
void to_json(nlohmann::json& j, const SweepRow& row);

// One artifact line per record, provenance first, LF line endings, stable key
// order and shortest-round-trip floats — re-runs produce identical bytes.
void write_jsonl(const std::filesystem::path& path, const Provenance& prov,
                 const std::vector<nlohmann::json>& lines);

template <class T>
void write_jsonl_records(const std::filesystem::path& path, const Provenance& prov,
                         const std::vector<T>& records) {
    std::vector<nlohmann::json> lines;
    lines.reserve(records.size());
    for (const T& record : records) lines.push_back(nlohmann::json(record));
    write_jsonl(path, prov, lines);
}

// Reads every non-empty line; a leading provenance line is stripped and
// reported through `prov` when requested. Errors name the path and line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path,
                                       std::optional<Provenance>* prov = nullptr);

template <class T>
std::vector<T> read_jsonl_records(const std::filesystem::path& path,
                                  std::optional<Provenance>* prov = nullptr) {
    std::vector<T> out;
    for (const nlohmann::json& line : read_jsonl(path, prov)) out.push_back(line.get<T>());
    return out;
}

// Index files are JSONL with a header line recording dim and the embedder
// identity; one {"doc_id","block_index","vector":[...]} line per entry.
void save_index(const std::filesystem::path& path, const VectorIndex& index,
                const Provenance& prov);

// Throws when the header is missing or, unless `expected_embedder` is empty,
// when the recorded embedder identity differs from it.
VectorIndex load_index(const std::filesystem::path& path,
                       const std::string& expected_embedder = "");

// CSV with a leading '#' provenance comment, then the header row.
void write_csv(const std::filesystem::path& path, const Provenance& prov,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string csv_field(const std::optional<double>& value);  // "" when absent

// `year,month,index` with optional '#' comments; months must be unique and
// the index values positive.
CpiSeries load_cpi_csv(const std::filesystem::path& path);

}  // namespace legalex
