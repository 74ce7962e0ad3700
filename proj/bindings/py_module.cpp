#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "legalex/corpus.hpp"
#include "legalex/embedder.hpp"
#include "legalex/entities.hpp"
#include "legalex/eval.hpp"
#include "legalex/llm_extractor.hpp"
#include "legalex/numeric.hpp"
#include "legalex/regex_extractor.hpp"
#include "legalex/retrieval.hpp"
#include "legalex/segmenter.hpp"
#include "legalex/stats.hpp"

namespace py = pybind11;

namespace {

legalex::Document text_document(const std::string& text) {
    legalex::Document doc;
    doc.id = "doc";
    doc.cleaned_text = text;
    return doc;
}

legalex::EntityKind kind_from_name(const std::string& name) {
    auto kind = legalex::parse_entity_kind(name);
    if (!kind) throw py::value_error("unknown entity kind \"" + name + "\"");
    return *kind;
}

py::dict segment_dict(const legalex::Segment& segment) {
    py::dict d;
    d["doc_id"] = segment.doc_id;
    d["char_start"] = segment.char_begin;
    d["char_end"] = segment.char_end;
    d["origin"] = segment.origin == legalex::SegmentOrigin::RegexWindow ? "regex_window"
                                                                        : "expanded_block";
    d["center_block"] = segment.center_block_index
                            ? py::object(py::cast(*segment.center_block_index))
                            : py::object(py::none());
    d["score"] = segment.score ? py::object(py::cast(*segment.score))
                               : py::object(py::none());
    d["text"] = segment.text;
    return d;
}

py::dict extraction_dict(const legalex::Extraction& extraction) {
    py::dict d;
    d["doc_id"] = extraction.doc_id;
    d["kind"] = legalex::entity_kind_name(extraction.kind);
    d["method"] = legalex::method_name(extraction.method);
    d["percentage"] = extraction.percentage ? py::object(py::cast(*extraction.percentage))
                                            : py::object(py::none());
    d["amount"] = extraction.amount ? py::object(py::cast(*extraction.amount))
                                    : py::object(py::none());
    d["error"] = extraction.error ? py::object(py::cast(*extraction.error))
                                  : py::object(py::none());
    return d;
}

}  // namespace

PYBIND11_MODULE(_legalex, m) {
    m.doc() = "Entity extraction pipeline for Argentine civil rulings (C++ core)";

    m.def(
        "clean_text",
        [](const std::string& raw, const std::vector<std::string>& patterns) {
            return legalex::clean_text(raw, legalex::CleaningRules(patterns));
        },
        py::arg("raw"), py::arg("patterns") = std::vector<std::string>{},
        "Remove header-code pattern matches and collapse runs of 3+ newlines.");

    m.def(
        "tokenize",
        [](const std::string& text) {
            std::vector<std::pair<std::size_t, std::size_t>> spans;
            for (const legalex::TokenSpan& span : legalex::tokenize(text))
                spans.emplace_back(span.begin, span.end);
            return spans;
        },
        py::arg("text"), "Whitespace token spans as (begin, end) byte offsets.");

    m.def(
        "block_texts",
        [](const std::string& text, std::size_t block_size) {
            legalex::SegmenterConfig cfg;
            cfg.block_size = block_size;
            std::vector<std::string> out;
            for (const legalex::TokenBlock& block :
                 legalex::block_split(text_document(text), cfg))
                out.push_back(block.text);
            return out;
        },
        py::arg("text"), py::arg("block_size") = 120,
        "Fixed-size token blocks of a text (final block keeps the remainder).");

    m.def(
        "percent_segments",
        [](const std::string& text, std::size_t window_chars, bool merge) {
            legalex::SegmenterConfig cfg;
            cfg.regex_window_chars = window_chars;
            cfg.merge_windows = merge;
            py::list out;
            for (const legalex::Segment& segment :
                 legalex::regex_percent_segments(text_document(text), cfg))
                out.append(segment_dict(segment));
            return out;
        },
        py::arg("text"), py::arg("window_chars") = 500, py::arg("merge") = true,
        "Character windows around every percent-symbol match.");

    m.def(
        "parse_spanish_number",
        [](const std::string& text) -> std::optional<double> {
            return legalex::parse_spanish_number(text);
        },
        py::arg("text"),
        "Parse an Argentine numeral (dots group thousands, comma is decimal).");

    m.def(
        "extract_percentages",
        [](const std::string& text) { return legalex::extract_percentages(text); },
        py::arg("text"), "Percentage values found in a segment, in order.");

    m.def(
        "extract_amounts",
        [](const std::string& text) { return legalex::extract_amounts(text); },
        py::arg("text"), "Currency amounts following a dollar sign, in order.");

    m.def(
        "regex_extract",
        [](const std::string& text) {
            py::list out;
            for (const legalex::Extraction& extraction : legalex::regex_extract(
                     text_document(text), legalex::SegmenterConfig{},
                     legalex::KeywordConfig{}))
                out.append(extraction_dict(extraction));
            return out;
        },
        py::arg("text"), "Baseline regex extraction over a single text.");

    m.def(
        "parse_response",
        [](const std::string& text, const std::string& kind) {
            return extraction_dict(
                legalex::parse_response(text, kind_from_name(kind)));
        },
        py::arg("text"), py::arg("kind"),
        "Parse a model response (first embedded JSON object) into an extraction.");

    m.def(
        "detect_hallucination",
        [](const std::vector<double>& probs, double p_u) {
            return legalex::detect_hallucination(probs, legalex::HallucinationConfig{p_u});
        },
        py::arg("token_probs"), py::arg("p_u"),
        "True when the minimum token probability falls below p_u.");

    m.def(
        "mock_embed",
        [](const std::vector<std::string>& texts, std::uint64_t seed, std::size_t dim) {
            return legalex::embed(texts, legalex::MockEmbedderSpec{seed, dim});
        },
        py::arg("texts"), py::arg("seed") = 1, py::arg("dim") = 64,
        "Deterministic offline embeddings (seeded trigram hashing, unit norm).");

    m.def(
        "point_value",
        [](std::optional<double> psi_amount, std::optional<double> psi_percent,
           std::optional<double> pi_amount, std::optional<double> pi_percent,
           std::optional<double> md_amount) -> py::object {
            legalex::PointValueInputs in;
            in.psi_amount = psi_amount;
            in.psi_percent = psi_percent;
            in.pi_amount = pi_amount;
            in.pi_percent = pi_percent;
            in.md_amount = md_amount;
            auto record = legalex::point_value(in);
            if (!record) return py::none();
            py::dict d;
            d["pv"] = record->pv;
            d["psi_term"] = record->psi_term ? py::object(py::cast(*record->psi_term))
                                             : py::object(py::none());
            d["pi_term"] = record->pi_term ? py::object(py::cast(*record->pi_term))
                                           : py::object(py::none());
            return d;
        },
        py::arg("psi_amount") = std::nullopt, py::arg("psi_percent") = std::nullopt,
        py::arg("pi_amount") = std::nullopt, py::arg("pi_percent") = std::nullopt,
        py::arg("md_amount") = std::nullopt,
        "Point value per ruling; None when no term is computable.");

    m.def(
        "disability_histogram",
        [](const std::vector<double>& values, const std::vector<double>& edges) {
            const legalex::Histogram hist = legalex::disability_histogram(values, edges);
            py::dict d;
            d["bin_edges"] = hist.bin_edges;
            d["counts"] = hist.counts;
            d["fractions"] = hist.fractions;
            d["fraction_below_30"] = legalex::fraction_below(values, 30.0);
            d["fraction_above_50"] = legalex::fraction_above(values, 50.0);
            return d;
        },
        py::arg("values"), py::arg("bin_edges"),
        "Histogram over disability percentages with the tail shares.");

    py::class_<legalex::VectorIndex>(m, "VectorIndex",
                                     "Exact flat cosine index over block vectors.")
        .def(py::init<std::size_t, std::string>(), py::arg("dim"),
             py::arg("embedder_id") = "custom")
        .def(
            "add",
            [](legalex::VectorIndex& index, const std::string& doc_id,
               std::size_t block_index, const std::vector<double>& vector) {
                index.add(legalex::BlockKey{doc_id, block_index}, vector);
            },
            py::arg("doc_id"), py::arg("block_index"), py::arg("vector"))
        .def(
            "search",
            [](const legalex::VectorIndex& index, const std::vector<double>& query,
               std::size_t k) {
                py::list out;
                for (const legalex::SearchHit& hit : index.search(query, k)) {
                    py::dict d;
                    d["doc_id"] = hit.key.doc_id;
                    d["block_index"] = hit.key.block_index;
                    d["score"] = hit.score;
                    out.append(d);
                }
                return out;
            },
            py::arg("query"), py::arg("k"))
        .def_property_readonly("dim", &legalex::VectorIndex::dim)
        .def("__len__", &legalex::VectorIndex::size);
}
