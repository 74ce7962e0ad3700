#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "legalex/config.hpp"
#include "legalex/hashing.hpp"
#include "legalex/serde.hpp"
#include "support/test_util.hpp"

using namespace legalex;
using nlohmann::json;
using testutil::TempDir;

namespace {

/// Sets an environment variable for the lifetime of a scope and restores the
/// previous value (or absence) afterwards.
class ScopedEnv {
  public:
    ScopedEnv(std::string name, const std::string& value) : name_(std::move(name)) {
        if (const char* old = std::getenv(name_.c_str())) previous_ = old;
        setenv(name_.c_str(), value.c_str(), 1);
    }
    ~ScopedEnv() {
        if (previous_)
            setenv(name_.c_str(), previous_->c_str(), 1);
        else
            unsetenv(name_.c_str());
    }
    ScopedEnv(const ScopedEnv&) = delete;
    ScopedEnv& operator=(const ScopedEnv&) = delete;

  private:
    std::string name_;
    std::optional<std::string> previous_;
};

json minimal_config(const std::filesystem::path& corpus_root) {
    return json{{"config_version", kConfigVersion},
                {"corpus", {{"root", corpus_root.string()}}}};
}

}  // namespace

TEST_CASE("provenance timestamp honors SOURCE_DATE_EPOCH") {
    {
        ScopedEnv pin("SOURCE_DATE_EPOCH", "0");
        CHECK(provenance_timestamp() == "1970-01-01T00:00:00Z");
    }
    {
        ScopedEnv pin("SOURCE_DATE_EPOCH", "1700000000");
        CHECK(provenance_timestamp() == "2023-11-14T22:13:20Z");
        Provenance prov = make_provenance("segments", "abc123");
        CHECK(prov.artifact == "segments");
        CHECK(prov.config_sha256 == "abc123");
        CHECK(prov.created_at == "2023-11-14T22:13:20Z");
    }
    // Unpinned it still produces the fixed ISO-8601 UTC shape.
    const std::string now = provenance_timestamp();
    REQUIRE(now.size() == 20);
    CHECK(now[4] == '-');
    CHECK(now[10] == 'T');
    CHECK(now.back() == 'Z');
}

TEST_CASE("provenance line round-trips and rejects non-provenance lines") {
    const Provenance prov{"index", "deadbeef", "2023-11-14T22:13:20Z"};
    const json line = to_json_line(prov);
    REQUIRE(line.contains("provenance"));
    CHECK(line["provenance"]["artifact"] == "index");
    CHECK(line["provenance"]["config_sha256"] == "deadbeef");
    CHECK(line["provenance"]["created_at"] == "2023-11-14T22:13:20Z");

    auto parsed = parse_provenance(line);
    REQUIRE(parsed.has_value());
    CHECK(parsed->artifact == "index");
    CHECK(parsed->config_sha256 == "deadbeef");
    CHECK(parsed->created_at == "2023-11-14T22:13:20Z");

    CHECK_FALSE(parse_provenance(json{{"doc_id", "d1"}}).has_value());
    CHECK_FALSE(parse_provenance(json::array()).has_value());
}

TEST_CASE("segment origin names round-trip") {
    CHECK(origin_name(SegmentOrigin::RegexWindow) == "regex_window");
    CHECK(origin_name(SegmentOrigin::ExpandedBlock) == "expanded_block");
    CHECK(parse_origin("regex_window") == SegmentOrigin::RegexWindow);
    CHECK(parse_origin("expanded_block") == SegmentOrigin::ExpandedBlock);
    CHECK_FALSE(parse_origin("window").has_value());
}

TEST_CASE("Document JSON round-trip") {
    Document doc;
    doc.id = "d1";
    doc.source_path = "corpus/d1.txt";
    doc.raw_text = "sentencia del año 2019\n";
    doc.cleaned_text = "sentencia del año 2019";
    doc.header = "Cámara Nacional";
    doc.in_scope = false;
    doc.ruling_date = Date{2019, 5, 17};
    doc.jurisdiction = "CABA";

    const json j = doc;
    CHECK(j["ruling_date"] == "2019-05-17");
    CHECK(j["jurisdiction"] == "CABA");
    CHECK(j["in_scope"] == false);

    const auto back = j.get<Document>();
    CHECK(back.id == doc.id);
    CHECK(back.source_path == doc.source_path);
    CHECK(back.raw_text == doc.raw_text);
    CHECK(back.cleaned_text == doc.cleaned_text);
    CHECK(back.header == doc.header);
    CHECK(back.in_scope == false);
    REQUIRE(back.ruling_date.has_value());
    CHECK(*back.ruling_date == Date{2019, 5, 17});
    REQUIRE(back.jurisdiction.has_value());
    CHECK(*back.jurisdiction == "CABA");

    SUBCASE("absent optionals serialize as null and read back as nullopt") {
        Document bare;
        bare.id = "d2";
        const json jb = bare;
        CHECK(jb["ruling_date"].is_null());
        CHECK(jb["jurisdiction"].is_null());
        const auto rt = jb.get<Document>();
        CHECK_FALSE(rt.ruling_date.has_value());
        CHECK_FALSE(rt.jurisdiction.has_value());
        CHECK(rt.in_scope);
    }

    SUBCASE("malformed ruling_date throws") {
        json bad = doc;
        bad["ruling_date"] = "17/05/2019";
        CHECK_THROWS_WITH_AS(bad.get<Document>(),
                             doctest::Contains("bad ruling_date"), std::runtime_error);
    }
}

TEST_CASE("Segment JSON round-trip") {
    Segment seg;
    seg.doc_id = "d1";
    seg.origin = SegmentOrigin::ExpandedBlock;
    seg.char_begin = 40;
    seg.char_end = 90;
    seg.text = "una incapacidad del 25%";
    seg.center_block_index = 3;
    seg.score = 0.75;

    const json j = seg;
    CHECK(j["origin"] == "expanded_block");
    CHECK(j["char_start"] == 40);
    CHECK(j["char_end"] == 90);
    CHECK(j["center_block"] == 3);
    CHECK(j["score"] == 0.75);

    const auto back = j.get<Segment>();
    CHECK(back.doc_id == "d1");
    CHECK(back.origin == SegmentOrigin::ExpandedBlock);
    CHECK(back.char_begin == 40);
    CHECK(back.char_end == 90);
    CHECK(back.text == seg.text);
    CHECK(back.center_block_index == std::size_t{3});
    CHECK(back.score == 0.75);

    SUBCASE("regex window segments carry null block and score") {
        Segment window;
        window.doc_id = "d2";
        window.origin = SegmentOrigin::RegexWindow;
        window.char_begin = 0;
        window.char_end = 10;
        window.text = "texto 25 %";
        const json jw = window;
        CHECK(jw["origin"] == "regex_window");
        CHECK(jw["center_block"].is_null());
        CHECK(jw["score"].is_null());
        const auto rt = jw.get<Segment>();
        CHECK(rt.origin == SegmentOrigin::RegexWindow);
        CHECK_FALSE(rt.center_block_index.has_value());
        CHECK_FALSE(rt.score.has_value());
    }

    SUBCASE("unknown origin throws") {
        json bad = seg;
        bad["origin"] = "teleport";
        CHECK_THROWS_WITH_AS(bad.get<Segment>(),
                             doctest::Contains("unknown segment origin"),
                             std::runtime_error);
    }
}

TEST_CASE("Extraction JSON round-trip") {
    Extraction full;
    full.doc_id = "d1";
    full.kind = EntityKind::PhysicalDisability;
    full.method = ExtractionMethod::Llm;
    full.percentage = 25.0;
    full.amount = 1500000.0;
    full.token_probs = std::vector<double>{0.9, 0.4};
    full.min_prob = 0.4;
    full.flagged_hallucination = true;
    full.error = "ParseFailure: demo";
    Segment seg;
    seg.doc_id = "d1";
    seg.origin = SegmentOrigin::ExpandedBlock;
    seg.char_begin = 0;
    seg.char_end = 5;
    seg.text = "abcde";
    seg.score = 0.5;
    full.provenance.push_back(seg);

    const json j = full;
    CHECK(j["kind"] == "physical_disability");
    CHECK(j["method"] == "llm");
    CHECK(j["percentage"] == 25.0);
    CHECK(j["token_probs"] == json::array({0.9, 0.4}));
    CHECK(j["flagged_hallucination"] == true);

    const auto back = j.get<Extraction>();
    CHECK(back.doc_id == "d1");
    CHECK(back.kind == EntityKind::PhysicalDisability);
    CHECK(back.method == ExtractionMethod::Llm);
    CHECK(back.percentage == 25.0);
    CHECK(back.amount == 1500000.0);
    REQUIRE(back.token_probs.has_value());
    CHECK(*back.token_probs == std::vector<double>{0.9, 0.4});
    CHECK(back.min_prob == 0.4);
    CHECK(back.flagged_hallucination == true);
    CHECK(back.error == "ParseFailure: demo");
    REQUIRE(back.provenance.size() == 1);
    CHECK(back.provenance[0].text == "abcde");
    CHECK(back.provenance[0].score == 0.5);

    SUBCASE("minimal extraction omits the optional keys") {
        Extraction bare;
        bare.doc_id = "d2";
        bare.kind = EntityKind::MoralDamage;
        bare.method = ExtractionMethod::Regex;
        const json jb = bare;
        CHECK(jb["percentage"].is_null());
        CHECK(jb["amount"].is_null());
        CHECK_FALSE(jb.contains("token_probs"));
        CHECK_FALSE(jb.contains("min_prob"));
        CHECK_FALSE(jb.contains("flagged_hallucination"));
        CHECK_FALSE(jb.contains("error"));
        const auto rt = jb.get<Extraction>();
        CHECK_FALSE(rt.percentage.has_value());
        CHECK_FALSE(rt.amount.has_value());
        CHECK_FALSE(rt.token_probs.has_value());
        CHECK_FALSE(rt.min_prob.has_value());
        CHECK_FALSE(rt.flagged_hallucination.has_value());
        CHECK_FALSE(rt.error.has_value());
    }

    SUBCASE("unknown method throws, absent method defaults to regex") {
        json bad = j;
        bad["method"] = "oracle";
        CHECK_THROWS_WITH_AS(bad.get<Extraction>(),
                             doctest::Contains("unknown extraction method"),
                             std::runtime_error);
        json legacy = j;
        legacy.erase("method");
        CHECK(legacy.get<Extraction>().method == ExtractionMethod::Regex);
    }
}

TEST_CASE("LabeledSample and Query JSON round-trip") {
    LabeledSample sample;
    sample.doc_id = "d1";
    sample.kind = EntityKind::PsychologicalDisability;
    sample.gold_percentage = 12.5;
    sample.entity_present_in_segments = true;
    Segment seg;
    seg.doc_id = "d1";
    seg.origin = SegmentOrigin::RegexWindow;
    seg.char_begin = 2;
    seg.char_end = 9;
    seg.text = "12,5 %";
    sample.offered_segments.push_back(seg);

    const json js = sample;
    CHECK(js["kind"] == "psychological_disability");
    CHECK(js["gold_percentage"] == 12.5);
    CHECK(js["gold_amount"].is_null());
    const auto sample_back = js.get<LabeledSample>();
    CHECK(sample_back.doc_id == "d1");
    CHECK(sample_back.kind == EntityKind::PsychologicalDisability);
    CHECK(sample_back.gold_percentage == 12.5);
    CHECK_FALSE(sample_back.gold_amount.has_value());
    CHECK(sample_back.entity_present_in_segments);
    REQUIRE(sample_back.offered_segments.size() == 1);
    CHECK(sample_back.offered_segments[0].text == "12,5 %");

    Query query;
    query.kind = EntityKind::MoralDamage;
    query.text = "daño moral indemnización";
    query.terms = {{"daño", 2.0}, {"moral", 1.5}};
    const json jq = query;
    const auto query_back = jq.get<Query>();
    CHECK(query_back.kind == EntityKind::MoralDamage);
    CHECK(query_back.text == query.text);
    REQUIRE(query_back.terms.size() == 2);
    CHECK(query_back.terms[0].term == "daño");
    CHECK(query_back.terms[0].weight == 2.0);
    CHECK(query_back.terms[1].term == "moral");
    CHECK(query_back.terms[1].weight == 1.5);
}

TEST_CASE("write_jsonl / read_jsonl round-trip with provenance") {
    TempDir tmp("legalex-serde");
    ScopedEnv pin("SOURCE_DATE_EPOCH", "1700000000");
    const Provenance prov = make_provenance("extractions", "c0ffee");
    const std::vector<json> lines = {json{{"doc_id", "a"}, {"value", 1}},
                                     json{{"doc_id", "b"}, {"value", 2.5}}};

    const auto path = tmp / "out/extractions.jsonl";
    write_jsonl(path, prov, lines);

    std::optional<Provenance> read_prov;
    const auto back = read_jsonl(path, &read_prov);
    REQUIRE(back.size() == 2);
    CHECK(back[0]["doc_id"] == "a");
    CHECK(back[1]["value"] == 2.5);
    REQUIRE(read_prov.has_value());
    CHECK(read_prov->artifact == "extractions");
    CHECK(read_prov->config_sha256 == "c0ffee");
    CHECK(read_prov->created_at == "2023-11-14T22:13:20Z");

    SUBCASE("re-writing the same records yields identical bytes") {
        const auto again = tmp / "out/extractions2.jsonl";
        write_jsonl(again, prov, lines);
        const std::string first = testutil::slurp(path);
        CHECK(first == testutil::slurp(again));
        CHECK(first.find("\"provenance\"") < first.find('\n'));
        CHECK(first.back() == '\n');
        CHECK(first.find('\r') == std::string::npos);
    }

    SUBCASE("reader skips blank lines and flags malformed JSON with the line") {
        const auto messy = tmp / "messy.jsonl";
        testutil::spit(messy, "{\"doc_id\":\"a\"}\n\n   \n{\"doc_id\":\"b\"}\n");
        std::optional<Provenance> none;
        const auto records = read_jsonl(messy, &none);
        CHECK(records.size() == 2);
        CHECK_FALSE(none.has_value());

        const auto broken = tmp / "broken.jsonl";
        testutil::spit(broken, "{\"doc_id\":\"a\"}\n{oops\n");
        CHECK_THROWS_WITH_AS(read_jsonl(broken), doctest::Contains("broken.jsonl:2"),
                             std::runtime_error);
        CHECK_THROWS_AS(read_jsonl(tmp / "absent.jsonl"), std::runtime_error);
    }

    SUBCASE("typed record helpers round-trip Extraction vectors") {
        std::vector<Extraction> records(1);
        records[0].doc_id = "d9";
        records[0].kind = EntityKind::MoralDamage;
        records[0].method = ExtractionMethod::Regex;
        records[0].amount = 250000.0;
        const auto typed = tmp / "typed.jsonl";
        write_jsonl_records(typed, prov, records);
        const auto loaded = read_jsonl_records<Extraction>(typed);
        REQUIRE(loaded.size() == 1);
        CHECK(loaded[0].doc_id == "d9");
        CHECK(loaded[0].amount == 250000.0);
    }
}

TEST_CASE("save_index / load_index round-trip and embedder guard") {
    TempDir tmp("legalex-index");
    ScopedEnv pin("SOURCE_DATE_EPOCH", "1700000000");
    VectorIndex index(3, "mock:seed=1:dim=3");
    index.add(BlockKey{"a", 0}, {3.0, 0.0, 4.0});
    index.add(BlockKey{"b", 2}, {0.0, 1.0, 0.0});

    const auto path = tmp / "index.jsonl";
    const Provenance prov = make_provenance("index", "c0ffee");
    save_index(path, index, prov);

    const VectorIndex loaded = load_index(path, "mock:seed=1:dim=3");
    REQUIRE(loaded.size() == 2);
    CHECK(loaded.dim() == 3);
    CHECK(loaded.embedder_id() == "mock:seed=1:dim=3");
    CHECK(loaded.keys()[0] == BlockKey{"a", 0});
    CHECK(loaded.keys()[1] == BlockKey{"b", 2});
    // Stored vectors are the normalized ones; doubles survive the JSON
    // round-trip bit-for-bit.
    CHECK(loaded.vector_at(0) == index.vector_at(0));
    CHECK(loaded.vector_at(1) == index.vector_at(1));
    CHECK(loaded.vector_at(0)[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(loaded.vector_at(0)[2] == doctest::Approx(0.8).epsilon(1e-12));

    SUBCASE("searches agree after the round-trip") {
        const std::vector<double> query{1.0, 0.2, 1.0};
        const auto before = index.search(query, 2);
        const auto after = loaded.search(query, 2);
        REQUIRE(before.size() == after.size());
        for (std::size_t i = 0; i < before.size(); ++i) {
            CHECK(before[i].key == after[i].key);
            CHECK(before[i].score == after[i].score);
        }
    }

    SUBCASE("loading under a different embedder identity throws") {
        CHECK_THROWS_WITH_AS(load_index(path, "mock:seed=2:dim=3"),
                             doctest::Contains("mock:seed=1:dim=3"), std::runtime_error);
        CHECK_NOTHROW(load_index(path));  // empty expectation skips the check
    }

    SUBCASE("missing or empty headers are rejected") {
        const auto headerless = tmp / "headerless.jsonl";
        testutil::spit(headerless,
                       "{\"doc_id\":\"a\",\"block_index\":0,\"vector\":[1.0]}\n");
        CHECK_THROWS_WITH_AS(load_index(headerless),
                             doctest::Contains("no dim/embedder header"),
                             std::runtime_error);
        const auto empty = tmp / "empty.jsonl";
        testutil::spit(empty, "");
        CHECK_THROWS_WITH_AS(load_index(empty), doctest::Contains("empty"),
                             std::runtime_error);
    }
}

TEST_CASE("write_csv quoting and provenance comment") {
    TempDir tmp("legalex-csv");
    ScopedEnv pin("SOURCE_DATE_EPOCH", "0");
    const Provenance prov = make_provenance("stats", "beef");
    const auto path = tmp / "table.csv";
    write_csv(path, prov, {"doc_id", "note", "value"},
              {{"a", "plain", "1.5"},
               {"b", "has,comma", "2"},
               {"c", "say \"hi\"", ""},
               {"d", "two\nlines", "3"}});

    const std::string text = testutil::slurp(path);
    CHECK(text.rfind("# artifact=stats config_sha256=beef created_at=1970-01-01T00:00:00Z\n",
                     0) == 0);
    CHECK(text.find("doc_id,note,value\n") != std::string::npos);
    CHECK(text.find("a,plain,1.5\n") != std::string::npos);
    CHECK(text.find("b,\"has,comma\",2\n") != std::string::npos);
    CHECK(text.find("c,\"say \"\"hi\"\"\",\n") != std::string::npos);
    CHECK(text.find("d,\"two\nlines\",3\n") != std::string::npos);

    CHECK(csv_field(std::nullopt).empty());
    CHECK(csv_field(1234.5) == "1234.5");
    CHECK(csv_field(25.0) == "25");
}

TEST_CASE("load_cpi_csv parses and validates") {
    TempDir tmp("legalex-cpi");
    const auto path = tmp / "cpi.csv";

    SUBCASE("valid file with comments and padding") {
        testutil::spit(path,
                       "# national CPI, base 2016\n"
                       "year,month,index\n"
                       "2019, 2, 189.8\n"
                       "2019,1,184.3\n"
                       "\n"
                       "2018,12,180.0\n");
        const CpiSeries series = load_cpi_csv(path);
        REQUIRE(series.values.size() == 3);
        CHECK(series.values.at(YearMonth{2018, 12}) == 180.0);
        CHECK(series.values.at(YearMonth{2019, 1}) == 184.3);
        CHECK(series.values.at(YearMonth{2019, 2}) == 189.8);
        // std::map keeps the months chronological regardless of file order
        CHECK(series.values.begin()->first == YearMonth{2018, 12});
    }

    SUBCASE("header row is mandatory and must match") {
        testutil::spit(path, "anio,mes,indice\n2019,1,184.3\n");
        CHECK_THROWS_WITH_AS(load_cpi_csv(path),
                             doctest::Contains("header year,month,index"),
                             std::runtime_error);
        testutil::spit(path, "# only a comment\n");
        CHECK_THROWS_WITH_AS(load_cpi_csv(path), doctest::Contains("no header row"),
                             std::runtime_error);
    }

    SUBCASE("bad rows are named with their line number") {
        testutil::spit(path, "year,month,index\n2019,1\n");
        CHECK_THROWS_WITH_AS(load_cpi_csv(path), doctest::Contains(":2"),
                             std::runtime_error);
        testutil::spit(path, "year,month,index\n2019,13,184.3\n");
        CHECK_THROWS_WITH_AS(load_cpi_csv(path), doctest::Contains("month out of range"),
                             std::runtime_error);
        testutil::spit(path, "year,month,index\n2019,1,0\n");
        CHECK_THROWS_WITH_AS(load_cpi_csv(path), doctest::Contains("positive"),
                             std::runtime_error);
        testutil::spit(path, "year,month,index\n2019,1,184.3\n2019,1,185.0\n");
        CHECK_THROWS_WITH_AS(load_cpi_csv(path), doctest::Contains("duplicate month"),
                             std::runtime_error);
    }
}

TEST_CASE("config: minimal document fills defaults") {
    TempDir tmp("legalex-config");
    std::filesystem::create_directories(tmp / "corpus");
    const json j = minimal_config("corpus");

    const PipelineConfig cfg = config_from_json(j, tmp.path());
    CHECK(cfg.config_version == kConfigVersion);
    CHECK(cfg.corpus_root == (tmp / "corpus").lexically_normal());
    CHECK(cfg.header_chars == 2000);
    CHECK(cfg.segmenter.block_size == 120);
    CHECK(cfg.segmenter.expansion_radius == 1);
    CHECK(cfg.segmenter.merge_windows);
    CHECK_FALSE(cfg.extractor.corrected_percent_pattern);
    CHECK(cfg.retrieval_k == 3);
    CHECK(cfg.top_m == 10);
    CHECK(std::holds_alternative<MockEmbedderSpec>(cfg.embedder));
    CHECK(cfg.hallucination.p_u == 0.0);
    CHECK(cfg.sweep_grid.size() == 11);
    CHECK(cfg.eval_tolerance == 0.01);
    CHECK(cfg.histogram_edges.size() == 11);
    CHECK(cfg.workers == 4);
    CHECK(cfg.output_dir == (tmp / "out").lexically_normal());
    CHECK(cfg.canonical == j);
    CHECK(cfg.config_sha256 == sha256_hex(j.dump()));
    CHECK_FALSE(cfg.prompt.text.empty());
}

TEST_CASE("config: structural validation") {
    TempDir tmp("legalex-config");
    std::filesystem::create_directories(tmp / "corpus");
    const json base = minimal_config("corpus");

    SUBCASE("unknown top-level keys are rejected") {
        json j = base;
        j["corups"] = json::object();
        CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                             doctest::Contains("unknown top-level key \"corups\""),
                             std::runtime_error);
    }

    SUBCASE("config_version is required and pinned") {
        json j = base;
        j.erase("config_version");
        CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                             doctest::Contains("config_version is required"),
                             std::runtime_error);
        j["config_version"] = kConfigVersion + 1;
        CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                             doctest::Contains("unsupported config_version"),
                             std::runtime_error);
    }

    SUBCASE("corpus.root must exist") {
        json j = base;
        j["corpus"]["root"] = "nowhere";
        CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                             doctest::Contains("corpus root does not exist"),
                             std::runtime_error);
        j["corpus"].erase("root");
        CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                             doctest::Contains("corpus.root is required"),
                             std::runtime_error);
    }

    SUBCASE("cleaning patterns must compile") {
        json j = base;
        j["corpus"]["cleaning_patterns"] = json::array({"valid", "(unclosed"});
        CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                             doctest::Contains("does not compile"), std::runtime_error);
    }

    SUBCASE("range checks") {
        auto expect_fail = [&](const json& patch, const char* needle) {
            json j = base;
            j.update(patch);
            CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                                 doctest::Contains(needle), std::runtime_error);
        };
        expect_fail(json{{"segmenter", {{"block_size", 0}}}}, "block_size");
        expect_fail(json{{"retrieval", {{"k", 0}}}}, "retrieval.k");
        expect_fail(json{{"retrieval", {{"top_m", 0}}}}, "top_m");
        expect_fail(json{{"llm", {{"temperature", -0.5}}}}, "temperature");
        expect_fail(json{{"hallucination", {{"p_u", 1.5}}}}, "p_u");
        expect_fail(json{{"hallucination", {{"sweep_grid", {0.0, -0.1}}}}}, "sweep_grid");
        expect_fail(json{{"eval", {{"tolerance", 0.0}}}}, "tolerance");
        expect_fail(json{{"stats", {{"histogram_edges", {10.0}}}}}, "edges");
        expect_fail(json{{"stats", {{"histogram_edges", {0.0, 50.0, 50.0}}}}}, "ascending");
        expect_fail(json{{"workers", 0}}, "workers");
    }
}

TEST_CASE("config: embedded API keys are refused") {
    TempDir tmp("legalex-config");
    std::filesystem::create_directories(tmp / "corpus");

    json j = minimal_config("corpus");
    j["llm"] = {{"endpoint", "http://localhost:1/v1/chat/completions"},
                {"api_key", "sk-secret"}};
    CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                         doctest::Contains("environment variable"), std::runtime_error);

    json j2 = minimal_config("corpus");
    j2["retrieval"] = {{"embedder", {{"type", "mock"}, {"apikey", "sk-secret"}}}};
    CHECK_THROWS_WITH_AS(config_from_json(j2, tmp.path()),
                         doctest::Contains("not allowed in config files"),
                         std::runtime_error);
}

TEST_CASE("config: sections override defaults") {
    TempDir tmp("legalex-config");
    std::filesystem::create_directories(tmp / "corpus");
    testutil::spit(tmp / "gold.jsonl", "{\"doc_id\":\"a\",\"kind\":\"moral_damage\"}\n");
    testutil::spit(tmp / "cpi.csv", "year,month,index\n2019,1,184.3\n");
    testutil::spit(tmp / "fixture.jsonl", "");

    json j = minimal_config("corpus");
    j["corpus"]["cleaning_patterns"] = {"Poder Judicial"};
    j["corpus"]["scope_must"] = {"incapacidad"};
    j["corpus"]["scope_must_not"] = {"penal"};
    j["corpus"]["header_chars"] = 500;
    j["segmenter"] = {{"block_size", 60},
                      {"expansion_radius", 2},
                      {"regex_window_chars", 200},
                      {"merge_windows", false}};
    j["extract"] = {{"corrected_percent_pattern", true}};
    j["keywords"] = {{"physical", {"física"}}};
    j["retrieval"] = {
        {"k", 5},
        {"top_m", 4},
        {"embedder", {{"type", "mock"}, {"seed", 7}, {"dim", 16}}},
        {"queries",
         {{"physical_disability",
           {{"exemplars", {"incapacidad física del 25%"}}, {"text", "incapacidad"}}}}}};
    j["prompt"] = {{"template", "K:{entity_kind_instruction}|S:{segments}"},
                   {"instructions", {{"moral_damage", "busca daño moral"}}}};
    j["llm"] = {{"endpoint", "http://localhost:9/v1/chat/completions"},
                {"model", "test-model"},
                {"temperature", 0.25},
                {"max_output_tokens", 99},
                {"request_logprobs", false},
                {"retry_limit", 1},
                {"api_key_env", "OTHER_KEY"},
                {"mock_fixture", "fixture.jsonl"}};
    j["hallucination"] = {{"p_u", 0.8}, {"sweep_grid", {0.0, 0.5, 1.0}}};
    j["eval"] = {{"tolerance", 0.1}, {"gold", "gold.jsonl"}};
    j["stats"] = {{"histogram_edges", {0.0, 50.0, 100.0}}, {"cpi_csv", "cpi.csv"}};
    j["workers"] = 2;
    j["output_dir"] = "artifacts";

    const PipelineConfig cfg = config_from_json(j, tmp.path());
    CHECK(cfg.cleaning_patterns == std::vector<std::string>{"Poder Judicial"});
    CHECK(cfg.scope.must_patterns == std::vector<std::string>{"incapacidad"});
    CHECK(cfg.scope.must_not_patterns == std::vector<std::string>{"penal"});
    CHECK(cfg.header_chars == 500);
    CHECK(cfg.segmenter.block_size == 60);
    CHECK(cfg.segmenter.expansion_radius == 2);
    CHECK(cfg.segmenter.regex_window_chars == 200);
    CHECK_FALSE(cfg.segmenter.merge_windows);
    CHECK(cfg.extractor.corrected_percent_pattern);
    CHECK(cfg.keywords.physical == std::vector<std::string>{"física"});
    CHECK(cfg.retrieval_k == 5);
    CHECK(cfg.top_m == 4);
    REQUIRE(std::holds_alternative<MockEmbedderSpec>(cfg.embedder));
    CHECK(std::get<MockEmbedderSpec>(cfg.embedder).seed == 7);
    CHECK(std::get<MockEmbedderSpec>(cfg.embedder).dim == 16);
    REQUIRE(cfg.queries.count(EntityKind::PhysicalDisability) == 1);
    const QuerySpec& spec = cfg.queries.at(EntityKind::PhysicalDisability);
    CHECK(spec.exemplars.size() == 1);
    CHECK(spec.text_override == "incapacidad");
    CHECK(cfg.prompt.text == "K:{entity_kind_instruction}|S:{segments}");
    CHECK(cfg.prompt.instructions.at(EntityKind::MoralDamage) == "busca daño moral");
    CHECK(cfg.llm.model == "test-model");
    CHECK(cfg.llm.temperature == 0.25);
    CHECK(cfg.llm.max_output_tokens == 99);
    CHECK_FALSE(cfg.llm.request_logprobs);
    CHECK(cfg.llm.retry_limit == 1);
    CHECK(cfg.llm.api_key_env == "OTHER_KEY");
    REQUIRE(cfg.llm.mock_fixture_path.has_value());
    CHECK(*cfg.llm.mock_fixture_path == (tmp / "fixture.jsonl").lexically_normal().string());
    CHECK(cfg.hallucination.p_u == 0.8);
    CHECK(cfg.sweep_grid == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(cfg.eval_tolerance == 0.1);
    CHECK(cfg.gold_path == (tmp / "gold.jsonl").lexically_normal());
    CHECK(cfg.histogram_edges == std::vector<double>{0.0, 50.0, 100.0});
    CHECK(cfg.cpi_csv == (tmp / "cpi.csv").lexically_normal());
    CHECK(cfg.workers == 2);
    CHECK(cfg.output_dir == (tmp / "artifacts").lexically_normal());
}

TEST_CASE("config: referenced files must exist") {
    TempDir tmp("legalex-config");
    std::filesystem::create_directories(tmp / "corpus");
    const json base = minimal_config("corpus");

    json j = base;
    j["eval"] = {{"gold", "missing.jsonl"}};
    CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                         doctest::Contains("eval.gold does not exist"),
                         std::runtime_error);

    json j2 = base;
    j2["stats"] = {{"cpi_csv", "missing.csv"}};
    CHECK_THROWS_WITH_AS(config_from_json(j2, tmp.path()),
                         doctest::Contains("stats.cpi_csv does not exist"),
                         std::runtime_error);

    json j3 = base;
    j3["llm"] = {{"mock_fixture", "missing.jsonl"}};
    CHECK_THROWS_WITH_AS(config_from_json(j3, tmp.path()),
                         doctest::Contains("llm.mock_fixture does not exist"),
                         std::runtime_error);
}

TEST_CASE("config: embedder and query validation") {
    TempDir tmp("legalex-config");
    std::filesystem::create_directories(tmp / "corpus");
    const json base = minimal_config("corpus");

    SUBCASE("remote embedder requires endpoint, model and dim") {
        json j = base;
        j["retrieval"] = {{"embedder",
                           {{"type", "remote"}, {"endpoint", "http://localhost:9"}}}};
        CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                             doctest::Contains("endpoint, model and dim"),
                             std::runtime_error);
        j["retrieval"]["embedder"]["model"] = "embed-1";
        j["retrieval"]["embedder"]["dim"] = 32;
        const PipelineConfig cfg = config_from_json(j, tmp.path());
        REQUIRE(std::holds_alternative<RemoteEmbedderSpec>(cfg.embedder));
        const auto& remote = std::get<RemoteEmbedderSpec>(cfg.embedder);
        CHECK(remote.model == "embed-1");
        CHECK(remote.dim == 32);
        CHECK(remote.api_key_env == "LEGALEX_EMBED_API_KEY");
    }

    SUBCASE("unknown embedder type and zero dim are rejected") {
        json j = base;
        j["retrieval"] = {{"embedder", {{"type", "quantum"}}}};
        CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                             doctest::Contains("unknown embedder type"),
                             std::runtime_error);
        j["retrieval"] = {{"embedder", {{"type", "mock"}, {"dim", 0}}}};
        CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                             doctest::Contains("dim must be >= 1"), std::runtime_error);
    }

    SUBCASE("unknown kinds in queries and instructions are rejected") {
        json j = base;
        j["retrieval"] = {{"queries", {{"astral_damage", {{"exemplars", {"x"}}}}}}};
        CHECK_THROWS_WITH_AS(config_from_json(j, tmp.path()),
                             doctest::Contains("unknown entity kind"),
                             std::runtime_error);
        json j2 = base;
        j2["prompt"] = {{"instructions", {{"astral_damage", "x"}}}};
        CHECK_THROWS_WITH_AS(config_from_json(j2, tmp.path()),
                             doctest::Contains("unknown entity kind"),
                             std::runtime_error);
    }
}

TEST_CASE("load_config resolves paths against the config's directory") {
    TempDir tmp("legalex-config");
    std::filesystem::create_directories(tmp / "nested/corpus");
    const json j = minimal_config("corpus");
    testutil::spit(tmp / "nested/pipeline.json", j.dump());

    const PipelineConfig cfg = load_config(tmp / "nested/pipeline.json");
    CHECK(cfg.corpus_root == (tmp / "nested/corpus").lexically_normal());
    CHECK(cfg.output_dir == (tmp / "nested/out").lexically_normal());

    CHECK_THROWS_WITH_AS(load_config(tmp / "absent.json"),
                         doctest::Contains("cannot read config file"),
                         std::runtime_error);
    testutil::spit(tmp / "bad.json", "{not json");
    CHECK_THROWS_WITH_AS(load_config(tmp / "bad.json"),
                         doctest::Contains("not valid JSON"), std::runtime_error);
}
