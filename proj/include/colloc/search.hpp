#pragma once
// Query evaluation over a repository snapshot and the vocabulary store.
//
// Four query classes: concept lists (AND/OR over complemented concept lists),
// attributing relationships (r, p), collection-level quality ranges and
// attribute-level quality ranges. Every result list is sorted by
// (biobank, collection) and carries its match evidence.

#include "colloc/expansion.hpp"
#include "colloc/quality.hpp"
#include "colloc/repository.hpp"

#include <optional>
#include <string>
#include <vector>

namespace colloc {

enum class QualityScope { collection, attribute };

const char* to_string(QualityScope s);

struct QualityHighlight {
    QualityScope scope = QualityScope::collection;
    std::string attribute;             // set when scope == attribute
    std::optional<ConceptId> concept_id; // annotating concept, attribute scope only
    QualityValue value;

    bool operator==(const QualityHighlight&) const = default;
};

struct CollectionHit {
    CollectionKey key;
    std::vector<AttributeMatch> matched_attributes;
    std::optional<QualityHighlight> highlight;

    bool operator==(const CollectionHit&) const = default;
};

struct SearchResult {
    std::vector<CollectionHit> hits;
    std::vector<std::string> warnings;

    std::vector<CollectionKey> keys() const;
};

struct RelationshipQuery {
    std::string vocabulary;
    std::string relationship;
    ConceptKey attributing;
};

SearchResult search_by_concepts(const QueryPlan& plan, const RepositoryState& repo);

// Unexpanded OR search over concepts_with_property(vocabulary, r, p).
// Unknown relationship or attributing concept -> empty result with a warning;
// "Is a" / "Maps to" -> InvalidQuery.
SearchResult search_by_relationship(const RelationshipQuery& q, const RepositoryState& repo);

SearchResult search_by_collection_quality(const QualityRange& range, const RepositoryState& repo);

// Attributes annotated by `annotating` (or any member of its complemented list
// when `expansion` is set) whose own value lies in `range`.
SearchResult search_by_attribute_quality(ConceptId annotating, const QualityRange& range, bool expansion,
                                         const RepositoryState& repo);

// Keeps the hits that pass the range. Collection scope checks the collection
// value; attribute scope checks the hit's matched attributes.
std::vector<CollectionHit> refine_by_quality(const std::vector<CollectionHit>& hits, const QualityRange& range,
                                             QualityScope scope, const RepositoryState& repo);

struct ConceptSuggestion {
    ConceptId concept_id{};
    std::size_t annotation_count = 0;

    bool operator==(const ConceptSuggestion&) const = default;
};

// Repository-backed autocompletion: case-insensitive prefix on code or name,
// ordered by descending annotation count, then name.
std::vector<ConceptSuggestion> suggest_concepts(const std::string& prefix, std::size_t limit,
                                                const RepositoryState& repo);

} // namespace colloc
