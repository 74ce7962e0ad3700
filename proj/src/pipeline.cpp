#include "legalex/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "legalex/eval.hpp"
#include "legalex/numeric.hpp"
#include "legalex/parallel.hpp"
#include "legalex/serde.hpp"
#include "legalex/stats.hpp"

using nlohmann::json;

namespace legalex {

namespace {

std::string qualified(const std::string& doc_id, EntityKind kind) {
    return doc_id + "/" + entity_kind_name(kind);
}

void write_report_json(const std::filesystem::path& path, const Provenance& prov,
                       json body) {
    body["provenance"] = to_json_line(prov)["provenance"];
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body.dump(2) << '\n';
}

std::filesystem::path preds_path_or_default(const PipelineConfig& cfg,
                                            const std::optional<std::filesystem::path>& o) {
    if (o) {
        if (!std::filesystem::exists(*o))
            throw std::runtime_error("extractions file does not exist: " + o->string());
        return *o;
    }
    for (const char* name : {"extractions_llm.jsonl", "extractions_regex.jsonl"}) {
        std::filesystem::path candidate = artifact_path(cfg, name);
        if (std::filesystem::exists(candidate)) return candidate;
    }
    throw std::runtime_error("no extractions artifact found; run extract first");
}

struct ExtractOutcome {
    std::vector<Extraction> extractions;  // ordered by (doc_id, kind)
    std::vector<std::string> warnings;
    std::vector<ErrorRecord> errors;  // per-record failures carried by extractions
    std::size_t n_docs = 0;
};

ExtractOutcome run_extract_in_memory(const PipelineConfig& cfg, ExtractionMethod method) {
    ExtractOutcome outcome;
    if (method == ExtractionMethod::Regex) {
        std::vector<Document> docs = read_corpus_artifact(cfg);
        outcome.n_docs = docs.size();
        std::vector<std::vector<Extraction>> slots(docs.size());
        std::vector<std::vector<std::string>> warning_slots(docs.size());
        parallel_for(docs.size(), cfg.workers, [&](std::size_t i) {
            slots[i] = regex_extract(docs[i], cfg.segmenter, cfg.keywords, cfg.extractor,
                                     &warning_slots[i]);
        });
        for (std::size_t i = 0; i < docs.size(); ++i) {
            outcome.extractions.insert(outcome.extractions.end(), slots[i].begin(),
                                       slots[i].end());
            outcome.warnings.insert(outcome.warnings.end(), warning_slots[i].begin(),
                                    warning_slots[i].end());
        }
    } else {
        std::vector<PromptJob> jobs = build_all_prompt_jobs(cfg);
        LlmClient client(cfg.llm);

        // one span of consecutive jobs per document
        std::vector<std::pair<std::size_t, std::size_t>> spans;
        for (std::size_t i = 0; i < jobs.size();) {
            std::size_t j = i;
            while (j < jobs.size() && jobs[j].doc_id == jobs[i].doc_id) ++j;
            spans.emplace_back(i, j);
            i = j;
        }
        outcome.n_docs = spans.size();

        std::vector<std::vector<Extraction>> slots(spans.size());
        std::vector<std::vector<std::string>> warning_slots(spans.size());
        parallel_for(spans.size(), cfg.llm.max_concurrent_requests, [&](std::size_t s) {
            std::vector<PromptJob> doc_jobs(jobs.begin() + spans[s].first,
                                            jobs.begin() + spans[s].second);
            slots[s] = run_prompt_jobs(doc_jobs, client, cfg.hallucination,
                                       &warning_slots[s]);
        });
        for (std::size_t s = 0; s < spans.size(); ++s) {
            outcome.extractions.insert(outcome.extractions.end(), slots[s].begin(),
                                       slots[s].end());
            outcome.warnings.insert(outcome.warnings.end(), warning_slots[s].begin(),
                                    warning_slots[s].end());
        }
    }
    for (const Extraction& extraction : outcome.extractions)
        if (extraction.error)
            outcome.errors.push_back(
                ErrorRecord{qualified(extraction.doc_id, extraction.kind),
                            *extraction.error});
    return outcome;
}

void write_histogram_svg(const std::filesystem::path& path, const Histogram& hist) {
    const double width = 640, height = 400, margin = 48;
    const double plot_w = width - 2 * margin, plot_h = height - 2 * margin;
    double max_fraction = 0.0;
    for (double f : hist.fractions) max_fraction = std::max(max_fraction, f);
    if (max_fraction <= 0.0) max_fraction = 1.0;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    const double span = hist.bin_edges.back() - hist.bin_edges.front();
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        const double x0 = margin + (hist.bin_edges[i] - hist.bin_edges.front()) / span * plot_w;
        const double x1 =
            margin + (hist.bin_edges[i + 1] - hist.bin_edges.front()) / span * plot_w;
        const double h = hist.fractions[i] / max_fraction * plot_h;
        svg << "<rect x=\"" << format_double(x0) << "\" y=\""
            << format_double(height - margin - h) << "\" width=\""
            << format_double(std::max(1.0, x1 - x0 - 2)) << "\" height=\""
            << format_double(h) << "\" fill=\"#4878a8\"/>\n";
    }
    svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (std::size_t i = 0; i < hist.bin_edges.size(); ++i) {
        const double x = margin + (hist.bin_edges[i] - hist.bin_edges.front()) / span * plot_w;
        svg << "<text x=\"" << format_double(x) << "\" y=\"" << height - margin + 16
            << "\" font-size=\"10\" text-anchor=\"middle\">"
            << format_double(hist.bin_edges[i]) << "</text>\n";
    }
    svg << "<text x=\"" << width / 2 << "\" y=\"" << margin / 2
        << "\" font-size=\"12\" text-anchor=\"middle\">share of rulings by disability "
           "percentage</text>\n";
    svg << "</svg>\n";

    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << svg.str();
}

}  // namespace

std::filesystem::path artifact_path(const PipelineConfig& cfg, std::string_view name) {
    return cfg.output_dir / name;
}

std::vector<Document> read_corpus_artifact(const PipelineConfig& cfg, bool in_scope_only) {
    const std::filesystem::path path = artifact_path(cfg, "corpus.jsonl");
    if (!std::filesystem::exists(path))
        throw std::runtime_error("corpus artifact missing (" + path.string() +
                                 "); run ingest first");
    std::vector<Document> docs = read_jsonl_records<Document>(path);
    if (in_scope_only)
        std::erase_if(docs, [](const Document& doc) { return !doc.in_scope; });
    return docs;
}

std::map<EntityKind, Query> read_queries_artifact(const PipelineConfig& cfg) {
    const std::filesystem::path path = artifact_path(cfg, "queries.jsonl");
    if (!std::filesystem::exists(path))
        throw std::runtime_error("queries artifact missing (" + path.string() +
                                 "); run query-gen first");
    std::map<EntityKind, Query> queries;
    for (const Query& query : read_jsonl_records<Query>(path)) queries[query.kind] = query;
    return queries;
}

RetrievalBundle load_retrieval_bundle(const PipelineConfig& cfg) {
    RetrievalBundle bundle;
    bundle.docs = read_corpus_artifact(cfg);
    bundle.queries = read_queries_artifact(cfg);

    VectorIndex global =
        load_index(artifact_path(cfg, "index.jsonl"), embedder_identity(cfg.embedder));

    for (const Document& doc : bundle.docs) {
        bundle.blocks[doc.id] = block_split(doc, cfg.segmenter);
        bundle.doc_indexes.try_emplace(doc.id, global.dim(), global.embedder_id());
    }
    for (std::size_t i = 0; i < global.size(); ++i) {
        auto it = bundle.doc_indexes.find(global.keys()[i].doc_id);
        if (it == bundle.doc_indexes.end()) continue;  // out-of-scope leftovers
        it->second.add(global.keys()[i], global.vector_at(i));
    }
    return bundle;
}

std::vector<PromptJob> build_all_prompt_jobs(const PipelineConfig& cfg) {
    RetrievalBundle bundle = load_retrieval_bundle(cfg);
    const std::vector<EntityKind> kinds(std::begin(kAllEntityKinds),
                                        std::end(kAllEntityKinds));
    std::vector<PromptJob> jobs;
    jobs.reserve(bundle.docs.size() * kinds.size());
    for (const Document& doc : bundle.docs) {
        RetrievalContext ctx;
        ctx.index = &bundle.doc_indexes.at(doc.id);
        ctx.queries = bundle.queries;
        ctx.embedder = cfg.embedder;
        ctx.k = cfg.retrieval_k;
        ctx.expansion_radius = cfg.segmenter.expansion_radius;
        std::vector<PromptJob> doc_jobs =
            build_prompt_jobs(doc, bundle.blocks.at(doc.id), kinds, ctx, cfg.prompt);
        jobs.insert(jobs.end(), std::make_move_iterator(doc_jobs.begin()),
                    std::make_move_iterator(doc_jobs.end()));
    }
    return jobs;
}

StageResult run_ingest(const PipelineConfig& cfg) {
    StageResult result;
    CorpusLoadResult loaded = load_corpus(cfg.corpus_root.string());
    result.errors = loaded.errors;

    CleaningRules rules(cfg.cleaning_patterns);
    parallel_for(loaded.documents.size(), cfg.workers, [&](std::size_t i) {
        prepare_document(loaded.documents[i], rules, cfg.scope, cfg.header_chars);
    });

    write_jsonl_records(artifact_path(cfg, "corpus.jsonl"),
                        make_provenance("corpus", cfg.config_sha256), loaded.documents);

    result.n_processed = loaded.documents.size();
    const auto in_scope = static_cast<std::size_t>(
        std::count_if(loaded.documents.begin(), loaded.documents.end(),
                      [](const Document& d) { return d.in_scope; }));
    result.notes.push_back("ingested " + std::to_string(result.n_processed) +
                           " documents (" + std::to_string(in_scope) + " in scope, " +
                           std::to_string(result.errors.size()) + " load errors)");
    return result;
}

StageResult run_segment(const PipelineConfig& cfg) {
    StageResult result;
    std::vector<Document> docs = read_corpus_artifact(cfg);
    std::vector<std::vector<Segment>> slots(docs.size());
    parallel_for(docs.size(), cfg.workers, [&](std::size_t i) {
        slots[i] = regex_percent_segments(docs[i], cfg.segmenter);
    });

    std::vector<Segment> segments;
    for (const auto& slot : slots) segments.insert(segments.end(), slot.begin(), slot.end());
    write_jsonl_records(artifact_path(cfg, "segments.jsonl"),
                        make_provenance("segments", cfg.config_sha256), segments);

    result.n_processed = docs.size();
    result.notes.push_back("wrote " + std::to_string(segments.size()) +
                           " percent-window segments from " + std::to_string(docs.size()) +
                           " documents");
    return result;
}

StageResult run_index_build(const PipelineConfig& cfg) {
    StageResult result;
    std::vector<Document> docs = read_corpus_artifact(cfg);
    std::vector<std::vector<TokenBlock>> slots(docs.size());
    parallel_for(docs.size(), cfg.workers, [&](std::size_t i) {
        slots[i] = block_split(docs[i], cfg.segmenter);
    });

    std::vector<std::string> texts;
    std::vector<BlockKey> keys;
    for (std::size_t i = 0; i < docs.size(); ++i)
        for (const TokenBlock& block : slots[i]) {
            texts.push_back(block.text);
            keys.push_back(BlockKey{block.doc_id, block.index});
        }

    std::vector<std::vector<double>> vectors = embed(texts, cfg.embedder);
    VectorIndex index(embedder_dim(cfg.embedder), embedder_identity(cfg.embedder));
    for (std::size_t i = 0; i < keys.size(); ++i) index.add(keys[i], vectors[i]);

    save_index(artifact_path(cfg, "index.jsonl"), index,
               make_provenance("index", cfg.config_sha256));

    result.n_processed = docs.size();
    result.notes.push_back("indexed " + std::to_string(index.size()) + " blocks from " +
                           std::to_string(docs.size()) + " documents (" +
                           index.embedder_id() + ")");
    return result;
}

StageResult run_query_gen(const PipelineConfig& cfg) {
    StageResult result;
    std::vector<Query> queries;
    for (const auto& [kind, spec] : cfg.queries) {
        try {
            Query query;
            if (!spec.exemplars.empty()) {
                TfIdfModel model = build_tfidf(spec.exemplars);
                query = make_query(kind, model, spec.exemplars, cfg.top_m);
            } else {
                query.kind = kind;
            }
            if (spec.text_override) query.text = *spec.text_override;
            if (query.text.empty())
                throw std::runtime_error("no exemplars and no text override");
            queries.push_back(std::move(query));
        } catch (const std::exception& e) {
            result.errors.push_back(ErrorRecord{entity_kind_name(kind), e.what()});
        }
    }
    write_jsonl_records(artifact_path(cfg, "queries.jsonl"),
                        make_provenance("queries", cfg.config_sha256), queries);

    result.n_processed = queries.size();
    result.notes.push_back("generated " + std::to_string(queries.size()) + " queries");
    if (cfg.queries.empty())
        result.notes.push_back(
            "no retrieval.queries configured; llm extraction will have nothing to retrieve "
            "with");
    return result;
}

StageResult run_extract(const PipelineConfig& cfg, ExtractionMethod method) {
    StageResult result;
    ExtractOutcome outcome = run_extract_in_memory(cfg, method);
    const std::string name = method == ExtractionMethod::Regex ? "extractions_regex.jsonl"
                                                               : "extractions_llm.jsonl";
    write_jsonl_records(artifact_path(cfg, name),
                        make_provenance("extractions", cfg.config_sha256),
                        outcome.extractions);

    result.n_processed = outcome.n_docs;
    result.errors = outcome.errors;
    result.notes.push_back("extracted " + std::to_string(outcome.extractions.size()) +
                           " records from " + std::to_string(outcome.n_docs) +
                           " documents (" + std::to_string(outcome.errors.size()) +
                           " errored, " + std::to_string(outcome.warnings.size()) +
                           " warnings)");
    return result;
}

StageResult run_label_assist(const PipelineConfig& cfg, ExtractionMethod method) {
    StageResult result;
    ExtractOutcome outcome = run_extract_in_memory(cfg, method);

    std::vector<LabeledSample> samples;
    samples.reserve(outcome.extractions.size());
    for (const Extraction& extraction : outcome.extractions) {
        LabeledSample sample;
        sample.doc_id = extraction.doc_id;
        sample.kind = extraction.kind;
        sample.gold_percentage = extraction.percentage;
        sample.gold_amount = extraction.amount;
        sample.offered_segments = extraction.provenance;
        samples.push_back(std::move(sample));
    }
    compute_presence(samples, cfg.eval_tolerance);
    write_jsonl_records(artifact_path(cfg, "label_assist.jsonl"),
                        make_provenance("label_assist", cfg.config_sha256), samples);

    result.n_processed = samples.size();
    result.errors = outcome.errors;
    result.notes.push_back("wrote " + std::to_string(samples.size()) +
                           " label candidates for manual correction");
    return result;
}

StageResult run_eval(const PipelineConfig& cfg,
                     const std::optional<std::filesystem::path>& preds_override,
                     bool seg_qa) {
    StageResult result;
    if (!cfg.gold_path)
        throw std::runtime_error("eval.gold is not configured; nothing to score against");
    std::vector<LabeledSample> gold = read_jsonl_records<LabeledSample>(*cfg.gold_path);
    compute_presence(gold, cfg.eval_tolerance);

    const std::filesystem::path preds_path = preds_path_or_default(cfg, preds_override);
    std::vector<Extraction> preds = read_jsonl_records<Extraction>(preds_path);

    std::vector<std::string> warnings;
    EvalReport report = score_extractions(preds, gold, cfg.eval_tolerance, &warnings);
    for (const std::string& w : warnings) result.errors.push_back(ErrorRecord{"eval", w});

    const std::vector<LabeledSample> dataset2 = filter_dataset2(gold);

    json body;
    body["report"] = report;
    body["preds"] = preds_path.string();
    body["dataset2"] = {
        {"n_input", gold.size()},
        {"n_retained", dataset2.size()},
        {"fraction_retained",
         gold.empty() ? 0.0
                      : static_cast<double>(dataset2.size()) /
                            static_cast<double>(gold.size())}};

    std::ostringstream table;
    table << "samples " << report.n_samples << " | answered " << report.n_answered
          << " | correct " << report.n_correct << " | parse failures "
          << report.n_parse_failures;
    result.notes.push_back(table.str());
    result.notes.push_back(
        "accuracy (correct/answered): " + format_double(report.accuracy) +
        (report.accuracy_defined ? "" : " [no answers]") +
        " | recall (correct/gold-present): " + format_double(report.recall));
    for (const auto& [kind, kr] : report.per_kind)
        result.notes.push_back("  " + entity_kind_name(kind) + ": " +
                               std::to_string(kr.n_correct) + "/" +
                               std::to_string(kr.n_answered) + " answered correct, " +
                               std::to_string(kr.n_gold_present) + " gold-present");
    result.notes.push_back("dataset-2 filter retains " + std::to_string(dataset2.size()) +
                           " of " + std::to_string(gold.size()) + " samples");

    if (seg_qa) {
        RetrievalBundle bundle = load_retrieval_bundle(cfg);
        std::map<std::string, const Document*> by_id;
        for (const Document& doc : bundle.docs) by_id[doc.id] = &doc;

        std::vector<LabeledSample> scored;
        for (const LabeledSample& sample : gold)
            if (sample.gold_percentage || sample.gold_amount) scored.push_back(sample);

        const double qa = segmentation_qa(
            scored,
            [&](const LabeledSample& sample) -> std::vector<Segment> {
                auto doc_it = by_id.find(sample.doc_id);
                auto query_it = bundle.queries.find(sample.kind);
                if (doc_it == by_id.end() || query_it == bundle.queries.end()) return {};
                return retrieve_segments(*doc_it->second, bundle.blocks.at(sample.doc_id),
                                         bundle.doc_indexes.at(sample.doc_id),
                                         query_it->second, cfg.embedder, cfg.retrieval_k,
                                         cfg.segmenter.expansion_radius);
            },
            cfg.eval_tolerance);
        body["segmentation_qa"] = qa;
        result.notes.push_back("segmentation QA (gold found in retrieved segments): " +
                               format_double(qa) + " over " +
                               std::to_string(scored.size()) + " gold-present samples");
    }

    write_report_json(artifact_path(cfg, "eval_report.json"),
                      make_provenance("eval_report", cfg.config_sha256), std::move(body));
    result.n_processed = gold.size();
    return result;
}

StageResult run_bench_hallucination(
    const PipelineConfig& cfg,
    const std::optional<std::filesystem::path>& negatives_override) {
    StageResult result;
    const std::filesystem::path negatives_path =
        negatives_override ? *negatives_override : artifact_path(cfg, "negatives.jsonl");
    if (!std::filesystem::exists(negatives_path))
        throw std::runtime_error("negatives file does not exist: " +
                                 negatives_path.string());

    std::vector<LabeledSample> negatives =
        read_jsonl_records<LabeledSample>(negatives_path);
    if (negatives.empty()) throw std::runtime_error("negatives file is empty");

    std::vector<NegativeGroup> groups;
    std::vector<PromptJob> jobs;
    groups.reserve(negatives.size());
    jobs.reserve(negatives.size());
    for (const LabeledSample& sample : negatives) {
        NegativeGroup group{sample.doc_id, sample.kind, sample.offered_segments};
        PromptJob job;
        job.doc_id = sample.doc_id;
        job.kind = sample.kind;
        job.segments = group.segments;
        try {
            job.prompt = render_prompt(cfg.prompt, sample.kind, group.segments);
        } catch (const std::exception& e) {
            job.error = e.what();
        }
        groups.push_back(std::move(group));
        jobs.push_back(std::move(job));
    }

    LlmClient client(cfg.llm);
    std::vector<std::string> warnings;
    std::vector<Extraction> runs =
        run_prompt_jobs(jobs, client, cfg.hallucination, &warnings);

    std::size_t cursor = 0;
    const double rate = hallucination_benchmark(
        groups, [&](const NegativeGroup&) { return runs[cursor++]; });

    std::vector<SweepRow> sweep =
        threshold_sweep(runs, negatives, cfg.sweep_grid, cfg.eval_tolerance);

    json body;
    body["hallucination_rate"] = rate;
    body["n_negatives"] = negatives.size();
    body["sweep"] = sweep;
    write_report_json(artifact_path(cfg, "bench_report.json"),
                      make_provenance("bench_report", cfg.config_sha256), std::move(body));

    result.n_processed = negatives.size();
    result.notes.push_back("hallucination rate on " + std::to_string(negatives.size()) +
                           " negative groups: " + format_double(rate));
    result.notes.push_back("p_u sweep rows: " + std::to_string(sweep.size()) +
                           " (flagged counts monotone in p_u)");
    for (const Extraction& run : runs)
        if (run.error)
            result.errors.push_back(
                ErrorRecord{qualified(run.doc_id, run.kind), *run.error});
    return result;
}

StageResult run_stats(const PipelineConfig& cfg,
                      const std::optional<std::filesystem::path>& preds_override,
                      const std::optional<std::filesystem::path>& chart_path) {
    StageResult result;
    const std::filesystem::path preds_path = preds_path_or_default(cfg, preds_override);
    std::vector<Extraction> extractions = read_jsonl_records<Extraction>(preds_path);

    std::map<std::string, Date> ruling_dates;
    for (const Document& doc : read_corpus_artifact(cfg, /*in_scope_only=*/false))
        if (doc.ruling_date) ruling_dates[doc.id] = *doc.ruling_date;

    std::map<std::string, std::vector<Extraction>> by_doc;
    for (Extraction& extraction : extractions)
        by_doc[extraction.doc_id].push_back(std::move(extraction));

    std::vector<std::string> warnings;
    std::vector<PointValueRecord> records;
    std::size_t skipped = 0;
    for (const auto& [doc_id, doc_extractions] : by_doc) {
        auto record = point_value(doc_extractions, &warnings);
        if (!record) {
            ++skipped;
            continue;
        }
        auto date = ruling_dates.find(doc_id);
        if (date != ruling_dates.end()) record->ruling_month = year_month(date->second);
        records.push_back(std::move(*record));
    }

    std::vector<std::vector<std::string>> pv_rows;
    for (const PointValueRecord& record : records) {
        pv_rows.push_back(
            {record.doc_id,
             record.ruling_month ? std::to_string(record.ruling_month->year) : "",
             record.ruling_month ? std::to_string(record.ruling_month->month) : "",
             format_double(record.pv), csv_field(record.psi_term),
             csv_field(record.pi_term)});
    }
    write_csv(artifact_path(cfg, "pv.csv"), make_provenance("pv", cfg.config_sha256),
              {"doc_id", "year", "month", "pv", "psi_term", "pi_term"}, pv_rows);

    std::vector<PointValueRecord> dated;
    for (const PointValueRecord& record : records)
        if (record.ruling_month) dated.push_back(record);
    const std::map<YearMonth, MonthlyStat> monthly = monthly_point_value(dated);

    std::vector<std::vector<std::string>> monthly_rows;
    for (const auto& [month, stat] : monthly)
        monthly_rows.push_back({std::to_string(month.year), std::to_string(month.month),
                                format_double(stat.mean), format_double(stat.median),
                                std::to_string(stat.n)});
    write_csv(artifact_path(cfg, "monthly.csv"),
              make_provenance("monthly", cfg.config_sha256),
              {"year", "month", "mean", "median", "n"}, monthly_rows);

    json body;
    body["n_extractions"] = extractions.size();
    body["n_docs"] = by_doc.size();
    body["n_point_values"] = records.size();
    body["n_skipped_no_point_value"] = skipped;
    body["n_months"] = monthly.size();
    body["n_warnings"] = warnings.size();

    if (cfg.cpi_csv) {
        const CpiSeries cpi = load_cpi_csv(*cfg.cpi_csv);
        const CpiComparison comparison = cpi_compare(monthly, cpi);
        std::vector<std::vector<std::string>> cpi_rows;
        for (const CpiRow& row : comparison.rows)
            cpi_rows.push_back({std::to_string(row.month.year),
                                std::to_string(row.month.month), csv_field(row.pv_mean),
                                csv_field(row.cpi), csv_field(row.pv_indexed)});
        write_csv(artifact_path(cfg, "cpi_compare.csv"),
                  make_provenance("cpi_compare", cfg.config_sha256),
                  {"year", "month", "pv_mean", "cpi", "pv_indexed"}, cpi_rows);
        body["pearson_pv_cpi"] =
            comparison.pearson ? json(*comparison.pearson) : json(nullptr);
        result.notes.push_back(
            "pv vs CPI Pearson: " +
            (comparison.pearson ? format_double(*comparison.pearson)
                                : std::string("n/a (<2 overlapping months)")));
    }

    std::vector<double> percentages;
    for (const auto& [doc_id, doc_extractions] : by_doc)
        for (const Extraction& extraction : doc_extractions) {
            if (!extraction.answered() || !extraction.percentage) continue;
            if (*extraction.percentage <= 0.0 || *extraction.percentage > 100.0) {
                warnings.push_back("percentage outside (0, 100] for " +
                                   qualified(extraction.doc_id, extraction.kind) +
                                   "; excluded from histogram");
                continue;
            }
            percentages.push_back(*extraction.percentage);
        }

    if (!percentages.empty()) {
        const Histogram hist = disability_histogram(percentages, cfg.histogram_edges);
        std::vector<std::vector<std::string>> hist_rows;
        for (std::size_t i = 0; i < hist.counts.size(); ++i)
            hist_rows.push_back({format_double(hist.bin_edges[i]),
                                 format_double(hist.bin_edges[i + 1]),
                                 std::to_string(hist.counts[i]),
                                 format_double(hist.fractions[i])});
        write_csv(artifact_path(cfg, "histogram.csv"),
                  make_provenance("histogram", cfg.config_sha256),
                  {"bin_start", "bin_end", "count", "fraction"}, hist_rows);

        body["fraction_below_30"] = fraction_below(percentages, 30.0);
        body["fraction_above_50"] = fraction_above(percentages, 50.0);
        result.notes.push_back(
            "disability distribution: " +
            format_double(fraction_below(percentages, 30.0) * 100.0) + "% below 30, " +
            format_double(fraction_above(percentages, 50.0) * 100.0) + "% above 50");
        if (chart_path) write_histogram_svg(*chart_path, hist);
    } else {
        result.notes.push_back("no disability percentages found; histogram skipped");
    }

    write_report_json(artifact_path(cfg, "stats_report.json"),
                      make_provenance("stats_report", cfg.config_sha256), std::move(body));

    for (const std::string& w : warnings) result.errors.push_back(ErrorRecord{"stats", w});
    result.n_processed = by_doc.size();
    result.notes.push_back("point values: " + std::to_string(records.size()) + " computed, " +
                           std::to_string(skipped) + " skipped, " +
                           std::to_string(monthly.size()) + " months");
    return result;
}

}  // namespace legalex
