#pragma once
// Seeded random inputs shared by unit and acceptance tests.

#include "colloc/repository.hpp"
#include "colloc/scenario.hpp"
#include "colloc/vocabulary.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using Rng = std::mt19937_64;

struct GraphShape {
    std::size_t max_concepts = 200;
    std::size_t max_is_a = 400;
    std::size_t max_maps_to = 40;
    std::size_t vocabularies = 3;
    std::size_t max_attributing = 60;
};

// Raw tables plus the store built from them. Oracles read the raw tables.
struct RandomGraph {
    std::vector<colloc::Concept> concepts;
    std::vector<colloc::ConceptRelationship> edges;
    std::shared_ptr<const colloc::VocabularyStore> store;
};

// "Is a" edges always point from a later to an earlier position in a shuffled
// order, so the result is acyclic.
RandomGraph random_graph(Rng& rng, const GraphShape& shape);

struct RepoShape {
    std::size_t max_collections = 12;
    std::size_t max_attributes = 8;
    std::size_t max_concepts_per_attribute = 3;
    double unresolved_rate = 0.05;
    double missing_quality_rate = 0.2;
};

// Records over `graph`'s concepts. Every attribute carries at least one
// concept; quality values are hundredths.
std::vector<colloc::CollectionRecord> random_records(Rng& rng, const RandomGraph& graph, const RepoShape& shape);

colloc::RepositoryState state_of(const std::vector<colloc::CollectionRecord>& records,
                                 std::shared_ptr<const colloc::VocabularyStore> store);

// Default seed-42 scenario, parsed once per process.
struct LoadedScenario {
    colloc::Scenario files;
    nlohmann::json ledger;
    std::shared_ptr<const colloc::VocabularyStore> store;
};

const LoadedScenario& default_scenario();

std::shared_ptr<const colloc::VocabularyStore> store_from_tables(const std::string& concept_table,
                                                                 const std::string& relationship_table);

std::vector<std::string> names(const std::vector<colloc::CollectionKey>& keys);
std::vector<std::string> sorted_strings(const nlohmann::json& array);

} // namespace fixtures
