#pragma once
// JSON shapes shared by the HTTP service and the CLI's --json output.

#include "colloc/ingest.hpp"
#include "colloc/search.hpp"

#include <nlohmann/json.hpp>

namespace colloc::codec {

using nlohmann::json;

json to_json(const Concept& c);
json to_json(const ConceptKey& k);
json to_json(const QualityMap& q);
json to_json(const CollectionHit& hit, const VocabularyStore& store);
json to_json(const SearchResult& result, const VocabularyStore& store);
json to_json(const Diagnostic& d);
json to_json(const IngestReport& report);
json to_json(const std::vector<ConceptSuggestion>& suggestions, const VocabularyStore& store);

// Collection list entry and full detail view.
json summary_json(const CollectionRecord& rec);
json detail_json(const CollectionRecord& rec, const RepositoryState& repo);

json error_json(int status, const std::string& code, const std::string& message,
                const std::vector<std::string>& details = {});

// Request decoding. All throw InvalidQuery with a machine-readable code.
ConceptKey concept_key_from_json(const json& j, const char* field);
QualityRange quality_range_from_json(const json& j);

} // namespace colloc::codec
