#pragma once
// Synthetic colorectal-cancer-cohort scenario: a vocabulary, an annotation
// file and a ledger JSON recording every planted fact (concepts, edges,
// annotations, quality values and the expected results of planted queries).
// Tests derive expectations from the ledger only.
//
// Defaults reproduce the validation cohort's dimensions: 10 collections
// (CRC1..CRC10) x 22 attributes, 90 annotating concepts from 6 vocabularies,
// 526 attribute-concept annotations, 206 patients (informational).

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace colloc {

struct ScenarioSpec {
    std::size_t collections = 10;
    std::size_t attributes_per_collection = 22;
    std::size_t concepts = 90;
    std::size_t vocabularies = 6;
    std::size_t annotations = 526;
    std::size_t patients = 206;
    std::uint64_t seed = 42;
};

// Empty when `spec` can be generated.
std::vector<std::string> validate(const ScenarioSpec& spec);

struct Scenario {
    std::string concept_table;      // tab-delimited CONCEPT
    std::string relationship_table; // tab-delimited CONCEPT_RELATIONSHIP
    std::string annotations_csv;
    std::string ledger_json;
};

// Throws Error when validate(spec) is non-empty. Same spec => identical bytes.
Scenario generate_scenario(const ScenarioSpec& spec);

inline constexpr const char* kAnnotationFile = "annotations.csv";
inline constexpr const char* kLedgerFile = "ledger.json";

// Writes CONCEPT.csv, CONCEPT_RELATIONSHIP.csv, annotations.csv, ledger.json.
void write_scenario(const Scenario& scenario, const std::filesystem::path& dir);

} // namespace colloc
