#include "colloc/ingest.hpp"
#include "colloc/scenario.hpp"
#include "colloc/search.hpp"

#include "fixtures.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>

using namespace colloc;
using nlohmann::json;

namespace {

RepositoryState imported(const fixtures::LoadedScenario& s) {
    Repository repo(s.store);
    ingest_annotation_file(s.files.annotations_csv, repo);
    return *repo.snapshot();
}

ConceptId resolve(const VocabularyStore& store, const json& key) {
    const auto* c = store.find(ConceptKey{key["code"], key["vocabulary"]});
    REQUIRE(c);
    return c->id;
}

} // namespace

TEST_CASE("same seed gives identical bytes, another seed does not", "[scenario]") {
    auto a = generate_scenario({});
    auto b = generate_scenario({});
    CHECK(a.concept_table == b.concept_table);
    CHECK(a.relationship_table == b.relationship_table);
    CHECK(a.annotations_csv == b.annotations_csv);
    CHECK(a.ledger_json == b.ledger_json);
    ScenarioSpec other;
    other.seed = 43;
    CHECK(generate_scenario(other).annotations_csv != a.annotations_csv);
}

TEST_CASE("inconsistent specs are rejected", "[scenario]") {
    ScenarioSpec s;
    s.annotations = 100; // fewer than 220 attribute slots
    CHECK_FALSE(validate(s).empty());
    CHECK_THROWS_AS(generate_scenario(s), Error);
    ScenarioSpec t;
    t.concepts = 600;
    CHECK_FALSE(validate(t).empty());
    ScenarioSpec z;
    z.collections = 0;
    CHECK_FALSE(validate(z).empty());
    CHECK(validate(ScenarioSpec{}).empty());
}

TEST_CASE("imported scenario matches the ledger's annotation list", "[scenario]") {
    const auto& s = fixtures::default_scenario();
    auto state = imported(s);
    std::set<std::tuple<std::string, std::string, std::string, std::string>> from_ledger, from_repo;
    auto str = [](const json& j) { return j.get<std::string>(); };
    for (const auto& a : s.ledger["annotations"])
        from_ledger.insert({str(a["collection"]), str(a["attribute"]), str(a["code"]), str(a["vocabulary"])});
    for (const auto& [key, rec] : state.collections())
        for (const auto& attr : rec.attributes)
            for (const auto& k : attr.concepts) from_repo.insert({rec.name, attr.name, k.code, k.vocabulary});
    CHECK(from_ledger == from_repo);
    CHECK(from_ledger.size() == 526);
}

TEST_CASE("ledger quality values are stored exactly", "[scenario]") {
    const auto& s = fixtures::default_scenario();
    auto state = imported(s);
    for (const auto& [name, q] : s.ledger["quality"].items()) {
        const auto* rec = state.find({"BBG", name});
        REQUIRE(rec);
        CHECK(rec->quality.at(QualityCharacteristic::completeness) == q["completeness"].get<double>());
        for (const auto& [attr, v] : q["attributes"].items())
            CHECK(rec->attribute(attr)->quality.at(QualityCharacteristic::completeness) == v.get<double>());
    }
}

TEST_CASE("the CRC3-only concept finds exactly CRC3", "[scenario]") {
    const auto& s = fixtures::default_scenario();
    auto state = imported(s);
    auto seed = resolve(*s.store, s.ledger["crc3_only_concept"]);
    auto r = search_by_concepts(compile({seed}, QueryOperator::Or, true, *s.store), state);
    CHECK(fixtures::names(r.keys()) == std::vector<std::string>{s.ledger["crc3_only_collection"].get<std::string>()});
}

TEST_CASE("the Has scale / Nom cluster finds the ledger's collections", "[scenario]") {
    const auto& s = fixtures::default_scenario();
    auto state = imported(s);
    const auto& nom = s.ledger["has_scale_nom"];
    auto r = search_by_relationship({"LOINC", "Has scale", {nom["attributing"]["code"], nom["attributing"]["vocabulary"]}},
                                    state);
    CHECK(fixtures::names(r.keys()) == fixtures::sorted_strings(nom["expected"]));
}

TEST_CASE("scenario files load from disk", "[scenario]") {
    auto dir = std::filesystem::temp_directory_path() / "colloc_scenario_files";
    std::filesystem::remove_all(dir);
    write_scenario(fixtures::default_scenario().files, dir);
    for (const char* f : {kConceptFile, kRelationshipFile, kAnnotationFile, kLedgerFile})
        CHECK(std::filesystem::exists(dir / f));
    auto load = load_vocabulary_dir(dir);
    CHECK(load.diagnostics.empty());
    CHECK(load.store.concept_count() == fixtures::default_scenario().ledger["totals"]["vocabulary_concepts"]);
    std::filesystem::remove_all(dir);
}

TEST_CASE("smaller specs generate consistent totals", "[scenario]") {
    ScenarioSpec s;
    s.collections = 3;
    s.attributes_per_collection = 22;
    s.concepts = 40;
    s.vocabularies = 4;
    s.annotations = 120;
    s.seed = 9;
    REQUIRE(validate(s).empty());
    auto sc = generate_scenario(s);
    auto store = fixtures::store_from_tables(sc.concept_table, sc.relationship_table);
    Repository repo(store);
    auto report = ingest_annotation_file(sc.annotations_csv, repo);
    CHECK(report.collections_touched == 3);
    auto snap = repo.snapshot();
    CHECK(snap->index_entry_count() == 120);
    CHECK(snap->concept_index().size() == 40);
    CHECK(store->vocabularies().size() == 4);
}
