#include "legalex/serde.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "http_util.hpp"
#include "legalex/numeric.hpp"
#include "legalex/text_util.hpp"

using nlohmann::json;

namespace legalex {

namespace {

void set_optional(json& j, const char* key, const std::optional<double>& value) {
    if (value)
        j[key] = *value;
    else
        j[key] = nullptr;
}

std::optional<double> get_optional_double(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

EntityKind kind_from_json(const json& j, const char* key) {
    const std::string name = j.at(key).get<std::string>();
    auto kind = parse_entity_kind(name);
    if (!kind) throw std::runtime_error("unknown entity kind \"" + name + "\"");
    return *kind;
}

}  // namespace

std::string provenance_timestamp() {
    std::time_t t = std::time(nullptr);
    if (auto pinned = detail::env_value("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long epoch = std::strtoll(pinned->c_str(), &end, 10);
        if (end && *end == '\0' && !pinned->empty()) t = static_cast<std::time_t>(epoch);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Provenance make_provenance(std::string artifact, std::string config_sha256) {
    return Provenance{std::move(artifact), std::move(config_sha256),
                      provenance_timestamp()};
}

json to_json_line(const Provenance& p) {
    return json{{"provenance",
                 {{"artifact", p.artifact},
                  {"config_sha256", p.config_sha256},
                  {"created_at", p.created_at}}}};
}

std::optional<Provenance> parse_provenance(const json& line) {
    if (!line.is_object() || !line.contains("provenance")) return std::nullopt;
    const json& p = line["provenance"];
    Provenance out;
    out.artifact = p.value("artifact", "");
    out.config_sha256 = p.value("config_sha256", "");
    out.created_at = p.value("created_at", "");
    return out;
}

std::string origin_name(SegmentOrigin origin) {
    return origin == SegmentOrigin::RegexWindow ? "regex_window" : "expanded_block";
}

std::optional<SegmentOrigin> parse_origin(std::string_view name) {
    if (name == "regex_window") return SegmentOrigin::RegexWindow;
    if (name == "expanded_block") return SegmentOrigin::ExpandedBlock;
    return std::nullopt;
}

void to_json(json& j, const Document& doc) {
    j = json{{"id", doc.id},
             {"source_path", doc.source_path},
             {"raw_text", doc.raw_text},
             {"cleaned_text", doc.cleaned_text},
             {"header", doc.header},
             {"in_scope", doc.in_scope}};
    j["ruling_date"] = doc.ruling_date ? json(format_date(*doc.ruling_date)) : json(nullptr);
    j["jurisdiction"] = doc.jurisdiction ? json(*doc.jurisdiction) : json(nullptr);
}

void from_json(const json& j, Document& doc) {
    doc = Document{};
    doc.id = j.at("id").get<std::string>();
    doc.source_path = j.value("source_path", "");
    doc.raw_text = j.value("raw_text", "");
    doc.cleaned_text = j.value("cleaned_text", "");
    doc.header = j.value("header", "");
    doc.in_scope = j.value("in_scope", true);
    if (j.contains("ruling_date") && j["ruling_date"].is_string()) {
        const std::string text = j["ruling_date"].get<std::string>();
        doc.ruling_date = parse_date(text);
        if (!doc.ruling_date)
            throw std::runtime_error("bad ruling_date \"" + text + "\" for " + doc.id);
    }
    if (j.contains("jurisdiction") && j["jurisdiction"].is_string())
        doc.jurisdiction = j["jurisdiction"].get<std::string>();
}

void to_json(json& j, const Segment& segment) {
    j = json{{"doc_id", segment.doc_id},
             {"origin", origin_name(segment.origin)},
             {"char_start", segment.char_begin},
             {"char_end", segment.char_end},
             {"text", segment.text}};
    j["center_block"] =
        segment.center_block_index ? json(*segment.center_block_index) : json(nullptr);
    j["score"] = segment.score ? json(*segment.score) : json(nullptr);
}

void from_json(const json& j, Segment& segment) {
    segment = Segment{};
    segment.doc_id = j.at("doc_id").get<std::string>();
    const std::string origin = j.at("origin").get<std::string>();
    auto parsed = parse_origin(origin);
    if (!parsed) throw std::runtime_error("unknown segment origin \"" + origin + "\"");
    segment.origin = *parsed;
    segment.char_begin = j.at("char_start").get<std::size_t>();
    segment.char_end = j.at("char_end").get<std::size_t>();
    segment.text = j.value("text", "");
    if (j.contains("center_block") && !j["center_block"].is_null())
        segment.center_block_index = j["center_block"].get<std::size_t>();
    segment.score = get_optional_double(j, "score");
}

void to_json(json& j, const Extraction& extraction) {
    j = json{{"doc_id", extraction.doc_id},
             {"kind", entity_kind_name(extraction.kind)},
             {"method", method_name(extraction.method)},
             {"provenance", extraction.provenance}};
    set_optional(j, "percentage", extraction.percentage);
    set_optional(j, "amount", extraction.amount);
    if (extraction.token_probs) j["token_probs"] = *extraction.token_probs;
    if (extraction.min_prob) j["min_prob"] = *extraction.min_prob;
    if (extraction.flagged_hallucination)
        j["flagged_hallucination"] = *extraction.flagged_hallucination;
    if (extraction.error) j["error"] = *extraction.error;
}

void from_json(const json& j, Extraction& extraction) {
    extraction = Extraction{};
    extraction.doc_id = j.at("doc_id").get<std::string>();
    extraction.kind = kind_from_json(j, "kind");
    const std::string method = j.value("method", "regex");
    auto parsed = parse_method(method);
    if (!parsed) throw std::runtime_error("unknown extraction method \"" + method + "\"");
    extraction.method = *parsed;
    extraction.percentage = get_optional_double(j, "percentage");
    extraction.amount = get_optional_double(j, "amount");
    if (j.contains("provenance"))
        extraction.provenance = j["provenance"].get<std::vector<Segment>>();
    if (j.contains("token_probs") && !j["token_probs"].is_null())
        extraction.token_probs = j["token_probs"].get<std::vector<double>>();
    extraction.min_prob = get_optional_double(j, "min_prob");
    if (j.contains("flagged_hallucination") && !j["flagged_hallucination"].is_null())
        extraction.flagged_hallucination = j["flagged_hallucination"].get<bool>();
    if (j.contains("error") && !j["error"].is_null())
        extraction.error = j["error"].get<std::string>();
}

void to_json(json& j, const LabeledSample& sample) {
    j = json{{"doc_id", sample.doc_id},
             {"kind", entity_kind_name(sample.kind)},
             {"segments", sample.offered_segments},
             {"entity_present_in_segments", sample.entity_present_in_segments}};
    set_optional(j, "gold_percentage", sample.gold_percentage);
    set_optional(j, "gold_amount", sample.gold_amount);
}

void from_json(const json& j, LabeledSample& sample) {
    sample = LabeledSample{};
    sample.doc_id = j.at("doc_id").get<std::string>();
    sample.kind = kind_from_json(j, "kind");
    sample.gold_percentage = get_optional_double(j, "gold_percentage");
    sample.gold_amount = get_optional_double(j, "gold_amount");
    if (j.contains("segments"))
        sample.offered_segments = j["segments"].get<std::vector<Segment>>();
    sample.entity_present_in_segments = j.value("entity_present_in_segments", false);
}

void to_json(json& j, const Query& query) {
    json terms = json::array();
    for (const WeightedTerm& term : query.terms)
        terms.push_back(json{{"term", term.term}, {"weight", term.weight}});
    j = json{{"kind", entity_kind_name(query.kind)}, {"text", query.text},
             {"terms", std::move(terms)}};
}

void from_json(const json& j, Query& query) {
    query = Query{};
    query.kind = kind_from_json(j, "kind");
    query.text = j.at("text").get<std::string>();
    if (j.contains("terms"))
        for (const json& term : j["terms"])
            query.terms.push_back(
                WeightedTerm{term.at("term").get<std::string>(),
                             term.at("weight").get<double>()});
}

void to_json(json& j, const KindReport& report) {
    j = json{{"n_samples", report.n_samples},     {"n_answered", report.n_answered},
             {"n_correct", report.n_correct},     {"n_gold_present", report.n_gold_present},
             {"n_parse_failures", report.n_parse_failures},
             {"accuracy", report.accuracy},       {"recall", report.recall}};
}

void to_json(json& j, const EvalReport& report) {
    json per_kind = json::object();
    for (const auto& [kind, kr] : report.per_kind) per_kind[entity_kind_name(kind)] = kr;
    j = json{{"n_samples", report.n_samples},
             {"n_answered", report.n_answered},
             {"n_correct", report.n_correct},
             {"n_gold_present", report.n_gold_present},
             {"n_empty_correct", report.n_empty_correct},
             {"n_parse_failures", report.n_parse_failures},
             {"accuracy", report.accuracy},
             {"recall", report.recall},
             {"accuracy_defined", report.accuracy_defined},
             {"per_kind", std::move(per_kind)}};
    j["hallucination_rate"] =
        report.hallucination_rate ? json(*report.hallucination_rate) : json(nullptr);
}

void to_json(json& j, const SweepRow& row) {
    j = json{{"p_u", row.p_u},
             {"n_flagged", row.n_flagged},
             {"flagged_rate", row.flagged_rate},
             {"flagged_among_incorrect", row.flagged_among_incorrect},
             {"flagged_among_correct", row.flagged_among_correct}};
}

void write_jsonl(const std::filesystem::path& path, const Provenance& prov,
                 const std::vector<json>& lines) {
    std::ofstream out = open_for_write(path);
    out << to_json_line(prov).dump() << '\n';
    for (const json& line : lines) out << line.dump() << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<json> read_jsonl(const std::filesystem::path& path,
                             std::optional<Provenance>* prov) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::vector<json> out;
    std::string line;
    std::size_t line_no = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json parsed = json::parse(line, nullptr, false);
        if (parsed.is_discarded())
            throw std::runtime_error("bad JSON at " + path.string() + ":" +
                                     std::to_string(line_no));
        if (first_content) {
            first_content = false;
            if (auto header = parse_provenance(parsed)) {
                if (prov) *prov = header;
                continue;
            }
        }
        out.push_back(std::move(parsed));
    }
    return out;
}

void save_index(const std::filesystem::path& path, const VectorIndex& index,
                const Provenance& prov) {
    std::ofstream out = open_for_write(path);
    json header = to_json_line(prov);
    header["dim"] = index.dim();
    header["embedder"] = index.embedder_id();
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < index.size(); ++i) {
        const BlockKey& key = index.keys()[i];
        out << json{{"doc_id", key.doc_id},
                    {"block_index", key.block_index},
                    {"vector", index.vector_at(i)}}
                   .dump()
            << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

VectorIndex load_index(const std::filesystem::path& path,
                       const std::string& expected_embedder) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("index file is empty: " + path.string());
    json header = json::parse(line, nullptr, false);
    if (header.is_discarded() || !header.contains("dim") || !header.contains("embedder"))
        throw std::runtime_error("index file has no dim/embedder header: " + path.string());
    const auto dim = header["dim"].get<std::size_t>();
    const auto embedder = header["embedder"].get<std::string>();
    if (!expected_embedder.empty() && embedder != expected_embedder)
        throw std::runtime_error("index " + path.string() + " was built by \"" + embedder +
                                 "\", expected \"" + expected_embedder + "\"");

    VectorIndex index(dim, embedder);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json entry = json::parse(line, nullptr, false);
        if (entry.is_discarded())
            throw std::runtime_error("bad JSON at " + path.string() + ":" +
                                     std::to_string(line_no));
        index.add(BlockKey{entry.at("doc_id").get<std::string>(),
                           entry.at("block_index").get<std::size_t>()},
                  entry.at("vector").get<std::vector<double>>());
    }
    return index;
}

void write_csv(const std::filesystem::path& path, const Provenance& prov,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out = open_for_write(path);
    out << "# artifact=" << prov.artifact << " config_sha256=" << prov.config_sha256
        << " created_at=" << prov.created_at << '\n';
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << csv_escape(row[i]);
        }
        out << '\n';
    };
    write_row(header);
    for (const auto& row : rows) write_row(row);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string csv_field(const std::optional<double>& value) {
    return value ? format_double(*value) : "";
}

CpiSeries load_cpi_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    CpiSeries series;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped(trim(line));
        if (stripped.empty() || stripped[0] == '#') continue;
        std::istringstream fields(stripped);
        std::string year_s, month_s, index_s;
        if (!std::getline(fields, year_s, ',') || !std::getline(fields, month_s, ',') ||
            !std::getline(fields, index_s))
            throw std::runtime_error("bad CPI row at " + path.string() + ":" +
                                     std::to_string(line_no));
        if (!saw_header) {
            saw_header = true;
            if (trim(year_s) != "year" || trim(month_s) != "month" ||
                trim(index_s) != "index")
                throw std::runtime_error("CPI file must start with header year,month,index: " +
                                         path.string());
            continue;
        }
        try {
            const int year = std::stoi(std::string(trim(year_s)));
            const int month = std::stoi(std::string(trim(month_s)));
            const double index = std::stod(std::string(trim(index_s)));
            if (month < 1 || month > 12)
                throw std::runtime_error("month out of range");
            if (index <= 0.0) throw std::runtime_error("index must be positive");
            if (!series.values.emplace(YearMonth{year, month}, index).second)
                throw std::runtime_error("duplicate month");
        } catch (const std::exception& e) {
            throw std::runtime_error("bad CPI row at " + path.string() + ":" +
                                     std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!saw_header)
        throw std::runtime_error("CPI file has no header row: " + path.string());
    return series;
}

}  // namespace legalex
