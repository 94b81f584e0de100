#pragma once
// Brute-force reference implementations. They read only raw concept and edge
// tables and raw collection records, never the store's indexes or the
// repository's inverted index.

#include "colloc/repository.hpp"
#include "colloc/vocabulary.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using colloc::CollectionRecord;
using colloc::Concept;
using colloc::ConceptId;
using colloc::ConceptRelationship;

using Keys = std::set<std::pair<std::string, std::string>>; // (biobank, name)

// Repeated union over the raw edge list until nothing changes.
std::set<ConceptId> ccl(ConceptId seed, const std::vector<ConceptRelationship>& edges);

// Concept-key -> id resolution straight from the concept table.
std::map<colloc::ConceptKey, ConceptId> key_table(const std::vector<Concept>& concepts);

// Collections whose attributes carry any resolvable concept in `members`.
Keys annotated_by(const std::set<ConceptId>& members, const std::vector<CollectionRecord>& records,
                  const std::map<colloc::ConceptKey, ConceptId>& keys);

Keys concept_search(const std::vector<ConceptId>& seeds, bool and_op, bool expansion,
                    const std::vector<ConceptRelationship>& edges, const std::vector<CollectionRecord>& records,
                    const std::map<colloc::ConceptKey, ConceptId>& keys);

Keys collection_quality(colloc::QualityCharacteristic c, double lo, double hi,
                        const std::vector<CollectionRecord>& records);

Keys attribute_quality(ConceptId annotating, colloc::QualityCharacteristic c, double lo, double hi, bool expansion,
                       const std::vector<ConceptRelationship>& edges, const std::vector<CollectionRecord>& records,
                       const std::map<colloc::ConceptKey, ConceptId>& keys);

// Edge scan for (c, r, p) with c in `vocabulary`, then annotation scan.
Keys relationship_search(const std::string& vocabulary, const std::string& relationship, ConceptId attributing,
                         const std::vector<Concept>& concepts, const std::vector<ConceptRelationship>& edges,
                         const std::vector<CollectionRecord>& records,
                         const std::map<colloc::ConceptKey, ConceptId>& keys);

Keys keys_of(const std::vector<colloc::CollectionKey>& keys);

} // namespace oracle
