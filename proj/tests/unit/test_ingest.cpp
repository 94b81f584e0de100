#include "colloc/csv.hpp"
#include "colloc/ingest.hpp"

#include "fixtures.hpp"

#include <catch_amalgamated.hpp>

using namespace colloc;

namespace {

const std::string kHeader =
    "biobank,collection,attribute,concept_code,vocabulary,completeness,accuracy,reliability,timeliness,consistency\n";

std::shared_ptr<const VocabularyStore> store() {
    std::vector<Concept> cs{{ConceptId{1}, {"39156-5", "LOINC"}, "BMI", "Measurement", true},
                            {ConceptId{2}, {"8302-2", "LOINC"}, "Height", "Measurement", true}};
    return std::make_shared<const VocabularyStore>(VocabularyStore::build(cs, {}));
}

bool has_message(const std::vector<Diagnostic>& ds, std::size_t line, Severity sev, const std::string& part) {
    for (const auto& d : ds)
        if (d.line == line && d.severity == sev && d.message.find(part) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_CASE("csv reader handles quotes, embedded newlines and CRLF", "[ingest]") {
    csv::Reader r("a,\"b,c\",\"d \"\"q\"\"\"\r\n\"multi\nline\",x,\r\nlast");
    auto row1 = r.next();
    REQUIRE(row1);
    CHECK(row1->line == 1);
    CHECK(row1->fields == std::vector<std::string>{"a", "b,c", "d \"q\""});
    auto row2 = r.next();
    REQUIRE(row2);
    CHECK(row2->line == 2);
    CHECK(row2->fields == std::vector<std::string>{"multi\nline", "x", ""});
    auto row3 = r.next();
    REQUIRE(row3);
    CHECK(row3->line == 4);
    CHECK(row3->fields == std::vector<std::string>{"last"});
    CHECK_FALSE(r.next());

    csv::Reader bad("a,\"open");
    CHECK_THROWS_AS(bad.next(), IngestError);
}

TEST_CASE("csv quoting round-trips arbitrary fields", "[ingest]") {
    std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "new\nline", "", " padded "};
    auto text = csv::format_row(fields);
    csv::Reader r(text);
    CHECK(r.next()->fields == fields);
}

TEST_CASE("annotation rows build attribute and collection records", "[ingest]") {
    std::string text = kHeader +
                       "BB,CRC1,,,,90%,,,,\n"
                       "BB,CRC1,bmi,39156-5,LOINC,0.85,,,,\n"
                       "BB,CRC1,bmi,8302-2,LOINC,,,,,\n"
                       "BB,CRC1,height,8302-2,LOINC,0.5,0.9,,,\n";
    auto parsed = parse_annotation_file(text);
    CHECK(parsed.diagnostics.empty());
    REQUIRE(parsed.rows.size() == 4);
    CHECK(parsed.rows[0].collection_level());

    auto staged = stage(parsed.rows, *store());
    CHECK(staged.diagnostics.empty());
    REQUIRE(staged.collections.size() == 1);
    const auto& rec = staged.collections[0].record;
    CHECK(rec.quality.at(QualityCharacteristic::completeness) == 0.9);
    REQUIRE(rec.attributes.size() == 2);
    CHECK(rec.attributes[0].name == "bmi");
    CHECK(rec.attributes[0].concepts.size() == 2);
    CHECK(rec.attributes[0].quality.at(QualityCharacteristic::completeness) == 0.85);
    CHECK(rec.attributes[1].quality.at(QualityCharacteristic::accuracy) == 0.9);
    CHECK(staged.collections[0].row_count == 4);
    CHECK(staged.collections[0].first_line == 2);
}

TEST_CASE("bad rows are reported with their line and skipped", "[ingest]") {
    std::string text = kHeader +
                       "BB,CRC1,bmi,39156-5,LOINC,1.4,,,,\n"  // 2: out of range
                       "BB,CRC1,bmi,39156-5,,,,,,\n"          // 3: code without vocabulary
                       ",CRC1,bmi,39156-5,LOINC,,,,,\n"       // 4: no biobank
                       "BB,CRC1,,39156-5,LOINC,,,,,\n"        // 5: concept on collection row
                       "BB,CRC1,bmi,,,,,,,\n"                 // 6: empty
                       "BB,CRC1,bmi\n"                        // 7: short
                       "BB,CRC1,bmi,39156-5,LOINC,,,,,\n";    // 8: fine
    auto parsed = parse_annotation_file(text);
    CHECK(parsed.rows.size() == 1);
    for (std::size_t line = 2; line <= 7; ++line) CHECK(has_message(parsed.diagnostics, line, Severity::error, ""));
    CHECK(has_message(parsed.diagnostics, 2, Severity::error, "completeness"));
}

TEST_CASE("missing header column aborts the file", "[ingest]") {
    CHECK_THROWS_AS(parse_annotation_file("biobank,collection,attribute\nBB,C,a\n"), IngestError);
    CHECK_THROWS_AS(parse_annotation_file(""), IngestError);
}

TEST_CASE("conflicting quality values keep the last one with a warning", "[ingest]") {
    std::string text = kHeader +
                       "BB,CRC1,bmi,39156-5,LOINC,0.5,,,,\n"
                       "BB,CRC1,bmi,8302-2,LOINC,0.7,,,,\n";
    auto staged = stage(parse_annotation_file(text).rows, *store());
    CHECK(staged.collections[0].record.attributes[0].quality.at(QualityCharacteristic::completeness) == 0.7);
    CHECK(has_message(staged.diagnostics, 3, Severity::warning, "last value wins"));
}

TEST_CASE("unresolved concepts are kept with a warning", "[ingest]") {
    std::string text = kHeader + "BB,CRC1,bmi,NOPE,LOINC,,,,,\nBB,CRC1,bmi,39156-5,LOINC,,,,,\n";
    Repository repo(store());
    auto report = ingest_annotation_file(text, repo);
    CHECK(report.accepted_rows == 2);
    CHECK(report.collections_touched == 1);
    CHECK(has_message(report.diagnostics, 2, Severity::warning, "not found in vocabulary"));
    auto snap = repo.snapshot();
    CHECK(snap->index_entry_count() == 1);
    CHECK(snap->unresolved({"BB", "CRC1"}).size() == 1);
}

TEST_CASE("description rows carry the collection description", "[ingest]") {
    std::string text =
        "biobank,collection,attribute,concept_code,vocabulary,completeness,accuracy,reliability,timeliness,"
        "consistency,description\n"
        "BB,CRC1,,_description,,,,,,,\"Colorectal, stage II\"\n"
        "BB,CRC1,bmi,39156-5,LOINC,,,,,,\n";
    auto staged = stage(parse_annotation_file(text).rows, *store());
    CHECK(staged.collections[0].record.description == "Colorectal, stage II");

    // Without a description column the text goes in a trailing cell.
    std::string legacy = kHeader + "BB,CRC1,,_description,,,,,,,old style\nBB,CRC1,bmi,39156-5,LOINC,,,,,\n";
    CHECK(stage(parse_annotation_file(legacy).rows, *store()).collections[0].record.description == "old style");
}

TEST_CASE("serialized records parse back to the same records", "[ingest]") {
    fixtures::Rng rng(21);
    for (int round = 0; round < 40; ++round) {
        auto g = fixtures::random_graph(rng, {40, 60, 8, 2, 5});
        auto records = fixtures::random_records(rng, g, {});
        auto parsed = parse_annotation_file(serialize_annotation_file(records));
        auto staged = stage(parsed.rows, *g.store);
        REQUIRE(staged.collections.size() == records.size());
        for (std::size_t i = 0; i < records.size(); ++i) REQUIRE(staged.collections[i].record == records[i]);
        for (const auto& d : parsed.diagnostics) REQUIRE(d.severity != Severity::error);
    }
}

TEST_CASE("importing the same file twice equals importing it once", "[ingest]") {
    fixtures::Rng rng(22);
    for (int round = 0; round < 20; ++round) {
        auto g = fixtures::random_graph(rng, {40, 60, 8, 2, 5});
        auto text = serialize_annotation_file(fixtures::random_records(rng, g, {}));
        Repository once(g.store), twice(g.store);
        ingest_annotation_file(text, once);
        ingest_annotation_file(text, twice);
        ingest_annotation_file(text, twice);
        REQUIRE(*once.snapshot() == *twice.snapshot());
    }
}
