#pragma once
// In-memory concept graph loaded from CDM-style CONCEPT / CONCEPT_RELATIONSHIP
// tables.
//
// Three kinds of edges are kept apart:
//   - "Is a"    child -> parent, forms the hierarchy (must be a DAG)
//   - "Maps to" treated as a symmetric one-hop equivalence
//   - anything else is an attributing relationship (c, r, p), e.g.
//     (LOINC concept, "Has scale", "Nom")
//
// The store is immutable once built; all queries are const and may run
// concurrently without locking.

#include "colloc/error.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace colloc {

enum class ConceptId : std::int64_t {};

inline std::int64_t to_int(ConceptId id) { return static_cast<std::int64_t>(id); }

using ConceptSet = std::set<ConceptId>;

// (concept code, vocabulary id)
struct ConceptKey {
    std::string code;
    std::string vocabulary;

    auto operator<=>(const ConceptKey&) const = default;
    bool operator==(const ConceptKey&) const = default;
};

std::string to_string(const ConceptKey& key);

struct Concept {
    ConceptId id{};
    ConceptKey key;
    std::string name;
    std::string domain;
    bool standard = false;

    bool operator==(const Concept&) const = default;
};

inline constexpr const char* kIsA = "Is a";
inline constexpr const char* kMapsTo = "Maps to";

inline bool is_reserved_relationship(const std::string& r) { return r == kIsA || r == kMapsTo; }

struct ConceptRelationship {
    ConceptId source{};
    std::string relationship;
    ConceptId target{};

    auto operator<=>(const ConceptRelationship&) const = default;
    bool operator==(const ConceptRelationship&) const = default;
};

class VocabularyStore {
public:
    VocabularyStore() = default;

    // Throws VocabularyError on duplicate ids/keys or an "Is a" cycle.
    // Edges must reference known concepts.
    static VocabularyStore build(std::vector<Concept> concepts,
                                 std::vector<ConceptRelationship> relationships);

    std::size_t concept_count() const { return concepts_.size(); }
    std::size_t relationship_count() const { return edges_.size(); }

    const std::vector<Concept>& concepts() const { return concepts_; }
    const std::vector<ConceptRelationship>& relationships() const { return edges_; }

    const Concept* find(ConceptId id) const;
    const Concept& at(ConceptId id) const;
    std::optional<Concept> resolve(const ConceptKey& key) const;
    const Concept* find(const ConceptKey& key) const;

    // Transitive reverse "Is a" reachability, excluding `c`.
    ConceptSet descendants(ConceptId c) const;
    // One-hop "Maps to" neighbours in either direction.
    ConceptSet equivalents(ConceptId c) const;
    // Direct "Is a" children.
    const std::vector<ConceptId>& children(ConceptId c) const;

    // Distinct vocabulary ids with their concept counts, sorted by id.
    std::map<std::string, std::size_t> vocabularies() const;

    // Attributing relationship labels used by concepts of `vocabulary`.
    std::set<std::string> list_relationships(const std::string& vocabulary) const;
    ConceptSet attributing_concepts(const std::string& vocabulary, const std::string& relationship) const;
    ConceptSet concepts_with_property(const std::string& vocabulary, const std::string& relationship,
                                      ConceptId attributing) const;

private:
    std::size_t index_of(ConceptId id) const;

    std::vector<Concept> concepts_;
    std::vector<ConceptRelationship> edges_;
    std::unordered_map<std::int64_t, std::size_t> by_id_;
    std::map<ConceptKey, std::size_t> by_key_;
    std::vector<std::vector<ConceptId>> children_;
    std::vector<ConceptSet> equivalents_;
    // vocabulary -> relationship -> attributing target -> sources
    std::map<std::string, std::map<std::string, std::map<ConceptId, ConceptSet>>> attributing_;
};

struct VocabularyLoad {
    VocabularyStore store;
    std::vector<Diagnostic> diagnostics;
};

// Parses tab-delimited CONCEPT and CONCEPT_RELATIONSHIP tables (header row
// required, unknown columns ignored). Bad rows and dangling edges are skipped
// with a diagnostic; duplicate ids and "Is a" cycles throw VocabularyError.
VocabularyLoad load_vocabulary(std::istream& concept_table, std::istream& relationship_table);
VocabularyLoad load_vocabulary(const std::filesystem::path& concept_file,
                               const std::filesystem::path& relationship_file);

// Conventional file names inside a vocabulary directory.
inline constexpr const char* kConceptFile = "CONCEPT.csv";
inline constexpr const char* kRelationshipFile = "CONCEPT_RELATIONSHIP.csv";

VocabularyLoad load_vocabulary_dir(const std::filesystem::path& dir);

} // namespace colloc
