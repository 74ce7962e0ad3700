#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "legalex/config.hpp"
#include "legalex/pipeline.hpp"

namespace {

int report(const legalex::StageResult& result) {
    for (const std::string& note : result.notes) std::cout << note << '\n';
    if (!result.errors.empty()) {
        std::cerr << result.errors.size() << " record-level error(s):\n";
        for (const legalex::ErrorRecord& e : result.errors)
            std::cerr << "  " << e.subject << ": " << e.message << '\n';
    }
    // partial per-record failures are reported but are not a failed run
    return 0;
}

std::optional<std::filesystem::path> as_path(const std::string& value) {
    if (value.empty()) return std::nullopt;
    return std::filesystem::path(value);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"legalex — entity extraction pipeline for Argentine civil rulings"};
    app.require_subcommand(1);

    int exit_code = 0;
    auto guarded = [&](const std::function<legalex::StageResult()>& stage) {
        try {
            exit_code = report(stage());
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            exit_code = 1;
        }
    };

    std::string config_path;
    std::string method = "regex";
    std::string preds;
    std::string negatives;
    std::string chart;
    bool seg_qa = false;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "pipeline config file (JSON)")
            ->required();
    };
    auto parse_method = [&]() {
        auto parsed = legalex::parse_method(method);
        if (!parsed) throw std::runtime_error("unknown method \"" + method + "\"");
        return *parsed;
    };

    CLI::App* ingest = app.add_subcommand(
        "ingest", "load, clean and scope-filter the corpus into corpus.jsonl");
    add_config(ingest);
    ingest->callback(
        [&] { guarded([&] { return run_ingest(legalex::load_config(config_path)); }); });

    CLI::App* segment = app.add_subcommand(
        "segment", "write percent-window segments for in-scope documents");
    add_config(segment);
    segment->callback(
        [&] { guarded([&] { return run_segment(legalex::load_config(config_path)); }); });

    CLI::App* index = app.add_subcommand(
        "index", "embed token blocks and persist the vector index");
    add_config(index);
    index->callback([&] {
        guarded([&] { return run_index_build(legalex::load_config(config_path)); });
    });

    CLI::App* query_gen = app.add_subcommand(
        "query-gen", "build tf-idf queries per entity kind from exemplar blocks");
    add_config(query_gen);
    query_gen->callback(
        [&] { guarded([&] { return run_query_gen(legalex::load_config(config_path)); }); });

    CLI::App* extract =
        app.add_subcommand("extract", "run entity extraction over the corpus");
    add_config(extract);
    extract->add_option("-m,--method", method, "regex or llm")->required();
    extract->callback([&] {
        guarded([&] {
            return run_extract(legalex::load_config(config_path), parse_method());
        });
    });

    CLI::App* label_assist = app.add_subcommand(
        "label-assist", "emit extraction results as editable gold-label candidates");
    add_config(label_assist);
    label_assist->add_option("-m,--method", method, "regex or llm (default regex)");
    label_assist->callback([&] {
        guarded([&] {
            return run_label_assist(legalex::load_config(config_path), parse_method());
        });
    });

    CLI::App* eval = app.add_subcommand(
        "eval", "score an extractions file against the configured gold dataset");
    add_config(eval);
    eval->add_option("-p,--preds", preds,
                     "extractions JSONL to score (default: latest extract artifact)");
    eval->add_flag("--seg-qa", seg_qa,
                   "also measure whether retrieval finds the gold values");
    eval->callback([&] {
        guarded([&] {
            return run_eval(legalex::load_config(config_path), as_path(preds), seg_qa);
        });
    });

    CLI::App* bench = app.add_subcommand(
        "bench-hallucination",
        "measure invented answers over entity-free segments, with a p_u sweep");
    add_config(bench);
    bench->add_option("-n,--negatives", negatives,
                      "negatives JSONL (default: <output_dir>/negatives.jsonl)");
    bench->callback([&] {
        guarded([&] {
            return run_bench_hallucination(legalex::load_config(config_path),
                                           as_path(negatives));
        });
    });

    CLI::App* stats = app.add_subcommand(
        "stats", "point values per ruling, monthly aggregates, CPI join, histogram");
    add_config(stats);
    stats->add_option("-p,--preds", preds,
                      "extractions JSONL to use (default: latest extract artifact)");
    stats->add_option("--chart", chart, "also render the histogram to this SVG path");
    stats->callback([&] {
        guarded([&] {
            return run_stats(legalex::load_config(config_path), as_path(preds),
                             as_path(chart));
        });
    });

    CLI11_PARSE(app, argc, argv);
    return exit_code;
}
