#include "legalex/llm_extractor.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>

#include "legalex/numeric.hpp"
#include "legalex/text_util.hpp"

using nlohmann::json;

namespace legalex {

namespace {

bool is_placeholder_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

// Single left-to-right pass: substituted content is never re-scanned, so
// braces inside segment text cannot masquerade as placeholders.
std::string substitute_placeholders(const std::string& tpl,
                                    const std::map<std::string, std::string>& bindings) {
    std::string out;
    out.reserve(tpl.size());
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (tpl[i] != '{') {
            out.push_back(tpl[i++]);
            continue;
        }
        std::size_t j = i + 1;
        while (j < tpl.size() && is_placeholder_char(tpl[j])) ++j;
        if (j > i + 1 && j < tpl.size() && tpl[j] == '}') {
            const std::string name = tpl.substr(i + 1, j - i - 1);
            auto it = bindings.find(name);
            if (it == bindings.end())
                throw std::runtime_error("prompt template has unbound placeholder {" + name +
                                         "}");
            out += it->second;
            i = j + 1;
        } else {
            out.push_back(tpl[i++]);  // literal brace, e.g. a JSON example
        }
    }
    return out;
}

// Finds the first balanced {...} span that parses as a JSON object. Tracks
// string literals so braces inside them do not count.
std::optional<json> first_json_object(const std::string& text) {
    for (std::size_t start = text.find('{'); start != std::string::npos;
         start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped)
                    escaped = false;
                else if (c == '\\')
                    escaped = true;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    json parsed =
                        json::parse(text.substr(start, i - start + 1), nullptr, false);
                    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
                    break;  // balanced but not valid JSON: try the next '{'
                }
            }
        }
    }
    return std::nullopt;
}

// A JSON value for "percentage"/"amount": number, numeric string (Argentine
// notation, optional % / $ decoration), or null. Anything else is a parse
// failure, reported through `fail`.
std::optional<double> read_value(const json& obj, const std::string& key,
                                 std::optional<std::string>& fail,
                                 std::vector<std::string>* warnings) {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    const json& value = obj[key];
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        std::string s = trim(value.get<std::string>());
        if (!s.empty() && s.front() == '$') s = trim(s.substr(1));
        if (!s.empty() && s.back() == '%') s = trim(s.substr(0, s.size() - 1));
        if (auto parsed = parse_spanish_number(s, warnings)) return parsed;
        fail = std::string(kParseFailurePrefix) + ": unparseable " + key + " string \"" +
               value.get<std::string>() + "\"";
        return std::nullopt;
    }
    fail = std::string(kParseFailurePrefix) + ": " + key + " is neither number nor string";
    return std::nullopt;
}

}  // namespace

PromptTemplate default_prompt_template() {
    PromptTemplate tpl;
    tpl.text =
        "Sos un asistente que lee sentencias judiciales argentinas y extrae datos "
        "puntuales.\n\n"
        "{entity_kind_instruction}\n\n"
        "Respondé únicamente con un objeto JSON con las claves \"percentage\" y "
        "\"amount\". Usá null cuando el dato no aparezca en los segmentos; no inventes "
        "valores.\n\n"
        "Segmentos de la sentencia:\n{segments}\n";
    tpl.instructions[EntityKind::PhysicalDisability] =
        "Buscá el porcentaje de incapacidad física reconocido al actor y el monto "
        "indemnizatorio otorgado por ese concepto.";
    tpl.instructions[EntityKind::PsychologicalDisability] =
        "Buscá el porcentaje de incapacidad psicológica reconocido al actor y el monto "
        "indemnizatorio otorgado por ese concepto.";
    tpl.instructions[EntityKind::PsychophysicalDisability] =
        "Buscá el porcentaje de incapacidad psicofísica reconocido al actor y el monto "
        "indemnizatorio otorgado por ese concepto.";
    tpl.instructions[EntityKind::MoralDamage] =
        "Buscá el monto otorgado en concepto de daño moral. Este rubro no lleva "
        "porcentaje: la clave \"percentage\" debe ser null.";
    return tpl;
}

std::string render_prompt(const PromptTemplate& tpl, EntityKind kind,
                          const std::vector<Segment>& segments) {
    if (segments.empty())
        throw std::invalid_argument("render_prompt requires at least one segment");
    auto instruction = tpl.instructions.find(kind);
    if (instruction == tpl.instructions.end())
        throw std::runtime_error("prompt template has no instruction for " +
                                 entity_kind_name(kind));

    std::vector<const Segment*> ordered;
    ordered.reserve(segments.size());
    for (const Segment& s : segments) ordered.push_back(&s);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Segment* a, const Segment* b) { return a->score > b->score; });

    std::string joined;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        if (i > 0) joined += kSegmentDelimiter;
        joined += ordered[i]->text;
    }
    return substitute_placeholders(
        tpl.text, {{"entity_kind_instruction", instruction->second}, {"segments", joined}});
}

Extraction parse_response(const std::string& text, EntityKind kind,
                          std::vector<std::string>* warnings) {
    Extraction out;
    out.kind = kind;
    out.method = ExtractionMethod::Llm;

    auto obj = first_json_object(text);
    if (!obj) {
        out.error = std::string(kParseFailurePrefix) + ": no JSON object in response";
        return out;
    }

    std::optional<std::string> fail;
    std::optional<double> percentage = read_value(*obj, "percentage", fail, warnings);
    std::optional<double> amount = read_value(*obj, "amount", fail, warnings);
    if (!fail) {
        if ((percentage && *percentage < 0) || (amount && *amount < 0))
            fail = std::string(kParseFailurePrefix) + ": negative value in response";
    }
    if (fail) {
        out.error = *fail;
        return out;
    }

    if (percentage && *percentage == 0.0) {
        if (warnings) warnings->push_back("response percentage 0 treated as absent");
        percentage.reset();
    }
    if (percentage && *percentage > 100.0 && warnings)
        warnings->push_back("response percentage above 100: " + format_double(*percentage));
    if (kind == EntityKind::MoralDamage && percentage) {
        if (warnings) warnings->push_back("dropped percentage on moral damage response");
        percentage.reset();
    }

    out.percentage = percentage;
    out.amount = amount;
    return out;
}

bool detect_hallucination(const std::vector<double>& token_probs,
                          const HallucinationConfig& cfg) {
    if (token_probs.empty())
        throw std::invalid_argument("detect_hallucination requires token probabilities");
    return *std::min_element(token_probs.begin(), token_probs.end()) < cfg.p_u;
}

std::vector<PromptJob> build_prompt_jobs(const Document& doc,
                                         const std::vector<TokenBlock>& doc_blocks,
                                         const std::vector<EntityKind>& kinds,
                                         const RetrievalContext& ctx,
                                         const PromptTemplate& tpl) {
    if (!ctx.index) throw std::invalid_argument("build_prompt_jobs requires an index");

    std::vector<EntityKind> unique_kinds;
    for (EntityKind kind : kinds)
        if (std::find(unique_kinds.begin(), unique_kinds.end(), kind) == unique_kinds.end())
            unique_kinds.push_back(kind);
    std::sort(unique_kinds.begin(), unique_kinds.end(),
              [](EntityKind a, EntityKind b) {
                  return static_cast<int>(a) < static_cast<int>(b);
              });

    std::vector<PromptJob> jobs;
    jobs.reserve(unique_kinds.size());
    for (EntityKind kind : unique_kinds) {
        PromptJob job;
        job.doc_id = doc.id;
        job.kind = kind;
        try {
            auto query = ctx.queries.find(kind);
            if (query == ctx.queries.end())
                throw std::runtime_error("no query for " + entity_kind_name(kind));
            job.segments = retrieve_segments(doc, doc_blocks, *ctx.index, query->second,
                                             ctx.embedder, ctx.k, ctx.expansion_radius);
            if (job.segments.empty()) throw std::runtime_error("no segments retrieved");
            job.prompt = render_prompt(tpl, kind, job.segments);
        } catch (const std::exception& e) {
            job.error = e.what();
        }
        jobs.push_back(std::move(job));
    }
    return jobs;
}

std::vector<Extraction> run_prompt_jobs(const std::vector<PromptJob>& jobs,
                                        const LlmClient& client,
                                        const HallucinationConfig& hall_cfg,
                                        std::vector<std::string>* warnings) {
    std::vector<Extraction> out;
    out.reserve(jobs.size());
    for (const PromptJob& job : jobs) {
        Extraction record;
        record.doc_id = job.doc_id;
        record.kind = job.kind;
        record.method = ExtractionMethod::Llm;
        if (job.error) {
            record.error = job.error;
            out.push_back(std::move(record));
            continue;
        }
        try {
            ModelResponse response = client.complete(job.prompt);
            if (warnings)
                warnings->insert(warnings->end(), response.warnings.begin(),
                                 response.warnings.end());

            Extraction parsed = parse_response(response.text, job.kind, warnings);
            record.percentage = parsed.percentage;
            record.amount = parsed.amount;
            record.error = parsed.error;
            record.provenance = job.segments;
            if (!response.token_probs.empty()) {
                record.min_prob = *std::min_element(response.token_probs.begin(),
                                                    response.token_probs.end());
                record.flagged_hallucination =
                    detect_hallucination(response.token_probs, hall_cfg);
                record.token_probs = std::move(response.token_probs);
            }
        } catch (const std::exception& e) {
            record.percentage.reset();
            record.amount.reset();
            record.error = e.what();
        }
        out.push_back(std::move(record));
    }
    return out;
}

std::vector<Extraction> extract_entities(const Document& doc,
                                         const std::vector<TokenBlock>& doc_blocks,
                                         const std::vector<EntityKind>& kinds,
                                         const RetrievalContext& ctx,
                                         const PromptTemplate& tpl,
                                         const LlmClient& client,
                                         const HallucinationConfig& hall_cfg,
                                         std::vector<std::string>* warnings) {
    return run_prompt_jobs(build_prompt_jobs(doc, doc_blocks, kinds, ctx, tpl), client,
                           hall_cfg, warnings);
}

}  // namespace legalex
