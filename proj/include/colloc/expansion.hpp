#pragma once
// Complemented concept lists: a seed concept plus everything reachable by
// alternately following "Maps to" equivalence (both directions) and
// descending the "Is a" hierarchy, until nothing new appears.

#include "colloc/vocabulary.hpp"

#include <string>
#include <vector>

namespace colloc {

struct ComplementedConceptList {
    ConceptId seed{};
    ConceptSet members;

    bool operator==(const ComplementedConceptList&) const = default;
};

enum class QueryOperator { And, Or };

const char* to_string(QueryOperator op);
// Accepts "AND" / "OR" (case-insensitive); throws InvalidQuery otherwise.
QueryOperator parse_operator(const std::string& text);

// OR plans hold one merged list; AND plans one list per seed, in seed order.
struct QueryPlan {
    QueryOperator op = QueryOperator::Or;
    std::vector<ComplementedConceptList> ccls;

    bool operator==(const QueryPlan&) const = default;
};

ComplementedConceptList expand(ConceptId seed, const VocabularyStore& store);

// Throws InvalidQuery("empty_query") for an empty seed list and
// InvalidQuery("unknown_concept") for seeds missing from the store.
QueryPlan compile(const std::vector<ConceptId>& seeds, QueryOperator op, bool expansion,
                  const VocabularyStore& store);

} // namespace colloc
