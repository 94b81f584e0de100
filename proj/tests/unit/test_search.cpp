#include "colloc/search.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace colloc;

namespace {

ConceptId id(std::int64_t v) { return ConceptId{v}; }

constexpr auto kCompleteness = QualityCharacteristic::completeness;

// 1 BMI; 2 Height; 3 Colon neoplasm <- 4 Sigmoid (Is a); 5 ICD colon ~ 3;
// 6/7 scale values; 8 SNOMED site.
struct World {
    std::shared_ptr<const VocabularyStore> store;
    RepositoryState state{nullptr};
};

World world() {
    std::vector<Concept> cs{{id(1), {"39156-5", "LOINC"}, "Body mass index", "Measurement", true},
                            {id(2), {"8302-2", "LOINC"}, "Body height", "Measurement", true},
                            {id(3), {"N1", "SNOMED"}, "Colon neoplasm", "Condition", true},
                            {id(4), {"N2", "SNOMED"}, "Sigmoid colon neoplasm", "Condition", true},
                            {id(5), {"C18", "ICD10"}, "Malignant neoplasm of colon", "Condition", false},
                            {id(6), {"LP-Nom", "LOINC"}, "Nom", "Meas Value", false},
                            {id(7), {"LP-Qn", "LOINC"}, "Qn", "Meas Value", false},
                            {id(8), {"S1", "SNOMED"}, "Colon structure", "Spec Anatomic Site", true}};
    std::vector<ConceptRelationship> es{{id(4), kIsA, id(3)},          {id(5), kMapsTo, id(3)},
                                        {id(1), "Has scale", id(7)},   {id(2), "Has scale", id(7)},
                                        {id(3), "Has finding site", id(8)}};
    World w;
    w.store = std::make_shared<const VocabularyStore>(VocabularyStore::build(cs, es));
    w.state = RepositoryState(w.store);
    auto rec = [](std::string name, double completeness, std::vector<AttributeRecord> attrs) {
        CollectionRecord r{"BB", std::move(name), "", std::move(attrs), {}};
        r.quality[kCompleteness] = completeness;
        return r;
    };
    w.state.upsert_collection(rec("CRC1", 0.9,
                                  {{"bmi", {{"39156-5", "LOINC"}}, {{kCompleteness, 0.85}}},
                                   {"diagnosis", {{"N2", "SNOMED"}}, {{kCompleteness, 1.0}}}}));
    w.state.upsert_collection(rec("CRC2", 0.6,
                                  {{"bmi", {{"39156-5", "LOINC"}}, {{kCompleteness, 0.40}}},
                                   {"height", {{"8302-2", "LOINC"}}, {{kCompleteness, 0.7}}}}));
    w.state.upsert_collection(rec("CRC3", 0.3, {{"icd", {{"C18", "ICD10"}}, {}}}));
    return w;
}

std::vector<std::string> names(const SearchResult& r) { return fixtures::names(r.keys()); }

QueryPlan plan(const World& w, std::vector<ConceptId> seeds, QueryOperator op, bool expansion = true) {
    return compile(seeds, op, expansion, *w.store);
}

} // namespace

TEST_CASE("concept search expands through hierarchy and mappings", "[search]") {
    auto w = world();
    CHECK(names(search_by_concepts(plan(w, {id(3)}, QueryOperator::Or), w.state)) ==
          std::vector<std::string>{"CRC1", "CRC3"});
    CHECK(names(search_by_concepts(plan(w, {id(3)}, QueryOperator::Or, false), w.state)).empty());
    CHECK(names(search_by_concepts(plan(w, {id(4)}, QueryOperator::Or), w.state)) == std::vector<std::string>{"CRC1"});
}

TEST_CASE("AND needs every list, OR any", "[search]") {
    auto w = world();
    CHECK(names(search_by_concepts(plan(w, {id(1), id(2)}, QueryOperator::And), w.state)) ==
          std::vector<std::string>{"CRC2"});
    CHECK(names(search_by_concepts(plan(w, {id(1), id(2)}, QueryOperator::Or), w.state)) ==
          std::vector<std::string>{"CRC1", "CRC2"});
    CHECK(names(search_by_concepts(plan(w, {id(1), id(3)}, QueryOperator::And), w.state)) ==
          std::vector<std::string>{"CRC1"});
}

TEST_CASE("hits carry matched attributes and concepts", "[search]") {
    auto w = world();
    auto r = search_by_concepts(plan(w, {id(1), id(3)}, QueryOperator::Or), w.state);
    REQUIRE(r.hits.size() == 3);
    CHECK(r.hits[0].matched_attributes ==
          std::vector<AttributeMatch>{{"bmi", {id(1)}}, {"diagnosis", {id(4)}}});
    CHECK(r.hits[2].matched_attributes == std::vector<AttributeMatch>{{"icd", {id(5)}}});
    CHECK_FALSE(r.hits[0].highlight);
}

TEST_CASE("relationship search is an unexpanded OR over property holders", "[search]") {
    auto w = world();
    auto r = search_by_relationship({"LOINC", "Has scale", {"LP-Qn", "LOINC"}}, w.state);
    CHECK(names(r) == std::vector<std::string>{"CRC1", "CRC2"});
    CHECK(r.warnings.empty());
    // CRC1 reaches concept 3 only through its child 4, which has no finding site.
    CHECK(names(search_by_relationship({"SNOMED", "Has finding site", {"S1", "SNOMED"}}, w.state)).empty());
    CHECK(search_by_relationship({"LOINC", "Has scale", {"LP-Nom", "LOINC"}}, w.state).hits.empty());
}

TEST_CASE("relationship search warns on unknown inputs and rejects reserved labels", "[search]") {
    auto w = world();
    auto unknown = search_by_relationship({"LOINC", "Has scale", {"nope", "LOINC"}}, w.state);
    CHECK(unknown.hits.empty());
    CHECK(unknown.warnings.size() == 1);
    auto unused = search_by_relationship({"ICD10", "Has scale", {"LP-Qn", "LOINC"}}, w.state);
    CHECK(unused.hits.empty());
    CHECK(unused.warnings.size() == 1);
    CHECK_THROWS_AS(search_by_relationship({"SNOMED", "Is a", {"N1", "SNOMED"}}, w.state), InvalidQuery);
    CHECK_THROWS_AS(search_by_relationship({"SNOMED", "Maps to", {"N1", "SNOMED"}}, w.state), InvalidQuery);
}

TEST_CASE("collection quality search with inclusive bounds and missing values", "[search]") {
    auto w = world();
    auto r = search_by_collection_quality({kCompleteness, 0.6, 0.9}, w.state);
    CHECK(names(r) == std::vector<std::string>{"CRC1", "CRC2"});
    REQUIRE(r.hits[0].highlight);
    CHECK(r.hits[0].highlight->scope == QualityScope::collection);
    CHECK(r.hits[0].highlight->value.value == 0.9);
    CHECK(search_by_collection_quality({QualityCharacteristic::accuracy, 0.0, 1.0}, w.state).hits.empty());
    CHECK_THROWS_AS(search_by_collection_quality({kCompleteness, 0.9, 0.1}, w.state), InvalidQuery);
}

TEST_CASE("attribute quality search highlights the matching attribute", "[search]") {
    auto w = world();
    auto r = search_by_attribute_quality(id(1), {kCompleteness, 0.5, 1.0}, false, w.state);
    REQUIRE(names(r) == std::vector<std::string>{"CRC1"});
    REQUIRE(r.hits[0].highlight);
    CHECK(r.hits[0].highlight->attribute == "bmi");
    CHECK(r.hits[0].highlight->concept_id == id(1));
    CHECK(r.hits[0].highlight->value.value == 0.85);

    CHECK(search_by_attribute_quality(id(3), {kCompleteness, 0.0, 1.0}, false, w.state).hits.empty());
    CHECK(names(search_by_attribute_quality(id(3), {kCompleteness, 0.0, 1.0}, true, w.state)) ==
          std::vector<std::string>{"CRC1"});
    CHECK_THROWS_AS(search_by_attribute_quality(id(99), {}, false, w.state), InvalidQuery);
}

TEST_CASE("refinement filters an earlier result", "[search]") {
    auto w = world();
    auto base = search_by_concepts(plan(w, {id(1)}, QueryOperator::Or), w.state).hits;
    auto attr = refine_by_quality(base, {kCompleteness, 0.5, 1.0}, QualityScope::attribute, w.state);
    REQUIRE(attr.size() == 1);
    CHECK(attr[0].key.name == "CRC1");
    CHECK(attr[0].highlight->attribute == "bmi");
    auto coll = refine_by_quality(base, {kCompleteness, 0.5, 0.7}, QualityScope::collection, w.state);
    REQUIRE(coll.size() == 1);
    CHECK(coll[0].key.name == "CRC2");
}

TEST_CASE("suggestions are repository-backed and ranked", "[search]") {
    auto w = world();
    auto s = suggest_concepts("body", 10, w.state);
    REQUIRE(s.size() == 2);
    CHECK(s[0].concept_id == id(1));
    CHECK(s[0].annotation_count == 2);
    CHECK(s[1].concept_id == id(2));
    CHECK(suggest_concepts("BODY", 1, w.state).size() == 1);
    CHECK(suggest_concepts("C18", 5, w.state).size() == 1);
    CHECK(suggest_concepts("colon", 5, w.state).empty()); // 3 and 8 annotate nothing
    auto top = suggest_concepts("", 2, w.state);
    REQUIRE(top.size() == 2);
    CHECK(top[0].concept_id == id(1));
    CHECK(suggest_concepts("zzz", 5, w.state).empty());
    CHECK_THROWS_AS(suggest_concepts("b", 0, w.state), InvalidQuery);
}

TEST_CASE("search agrees with brute force on random repositories", "[search]") {
    fixtures::Rng rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int round = 0; round < 60; ++round) {
        auto g = fixtures::random_graph(rng, {50, 80, 10, 2, 30});
        auto records = fixtures::random_records(rng, g, {});
        auto state = fixtures::state_of(records, g.store);
        auto keys = oracle::key_table(g.concepts);
        std::uniform_int_distribution<std::size_t> any(0, g.concepts.size() - 1);
        std::vector<ConceptId> seeds{g.concepts[any(rng)].id, g.concepts[any(rng)].id};
        for (bool and_op : {false, true})
            for (bool expansion : {false, true}) {
                auto p = compile(seeds, and_op ? QueryOperator::And : QueryOperator::Or, expansion, *g.store);
                REQUIRE(oracle::keys_of(search_by_concepts(p, state).keys()) ==
                        oracle::concept_search(seeds, and_op, expansion, g.edges, records, keys));
            }
        double a = unit(rng), b = unit(rng);
        QualityRange range{kCompleteness, std::min(a, b), std::max(a, b)};
        REQUIRE(oracle::keys_of(search_by_collection_quality(range, state).keys()) ==
                oracle::collection_quality(kCompleteness, range.min, range.max, records));
        REQUIRE(oracle::keys_of(search_by_attribute_quality(seeds[0], range, true, state).keys()) ==
                oracle::attribute_quality(seeds[0], kCompleteness, range.min, range.max, true, g.edges, records, keys));
    }
}
