#include "colloc/search.hpp"

#include "text_util.hpp"

#include <algorithm>

namespace colloc {

const char* to_string(QualityScope s) { return s == QualityScope::collection ? "collection" : "attribute"; }

std::vector<CollectionKey> SearchResult::keys() const {
    std::vector<CollectionKey> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back(h.key);
    return out;
}

namespace {

std::optional<double> value_of(const QualityMap& q, QualityCharacteristic c) {
    auto it = q.find(c);
    if (it == q.end()) return std::nullopt;
    return it->second;
}

// Matched concepts of one collection, flattened.
bool touches(const ConceptMatch& m, const ConceptSet& ccl) {
    for (const auto& a : m.attributes)
        for (auto c : a.concepts)
            if (ccl.count(c)) return true;
    return false;
}

} // namespace

SearchResult search_by_concepts(const QueryPlan& plan, const RepositoryState& repo) {
    SearchResult result;
    if (plan.ccls.empty()) return result;

    ConceptSet all;
    for (const auto& ccl : plan.ccls) all.insert(ccl.members.begin(), ccl.members.end());
    auto matches = repo.collections_for_concepts(all);

    for (auto& m : matches) {
        if (plan.op == QueryOperator::And) {
            bool every = std::all_of(plan.ccls.begin(), plan.ccls.end(),
                                     [&](const ComplementedConceptList& ccl) { return touches(m, ccl.members); });
            if (!every) continue;
        }
        result.hits.push_back({m.collection->key(), std::move(m.attributes), std::nullopt});
    }
    return result;
}

SearchResult search_by_relationship(const RelationshipQuery& q, const RepositoryState& repo) {
    if (q.relationship.empty() || is_reserved_relationship(q.relationship))
        throw InvalidQuery("invalid_query", "relationship must be an attributing relationship, not '" +
                                                q.relationship + "'");
    SearchResult result;
    const auto& store = repo.store();
    const auto* p = store.find(q.attributing);
    if (!p) {
        result.warnings.push_back("attributing concept " + to_string(q.attributing) + " not found");
        return result;
    }
    if (!store.list_relationships(q.vocabulary).count(q.relationship)) {
        result.warnings.push_back("relationship '" + q.relationship + "' not used in vocabulary '" + q.vocabulary +
                                  "'");
        return result;
    }
    auto concepts = store.concepts_with_property(q.vocabulary, q.relationship, p->id);
    if (concepts.empty()) return result;
    QueryPlan plan{QueryOperator::Or, {ComplementedConceptList{*concepts.begin(), std::move(concepts)}}};
    result.hits = search_by_concepts(plan, repo).hits;
    return result;
}

SearchResult search_by_collection_quality(const QualityRange& range, const RepositoryState& repo) {
    validate(range);
    SearchResult result;
    for (const auto& [key, rec] : repo.collections()) {
        auto v = value_of(rec.quality, range.characteristic);
        if (!v || !range.contains(*v)) continue;
        result.hits.push_back(
            {key, {}, QualityHighlight{QualityScope::collection, {}, std::nullopt, {range.characteristic, *v}}});
    }
    return result;
}

SearchResult search_by_attribute_quality(ConceptId annotating, const QualityRange& range, bool expansion,
                                         const RepositoryState& repo) {
    validate(range);
    const auto& store = repo.store();
    if (!store.find(annotating))
        throw InvalidQuery("unknown_concept", "unknown concept id " + std::to_string(to_int(annotating)));
    auto members = expansion ? expand(annotating, store).members : ConceptSet{annotating};

    SearchResult result;
    for (auto& m : repo.collections_for_concepts(members)) {
        CollectionHit hit{m.collection->key(), {}, std::nullopt};
        for (auto& a : m.attributes) {
            const auto* attr = m.collection->attribute(a.attribute);
            auto v = value_of(attr->quality, range.characteristic);
            if (!v || !range.contains(*v)) continue;
            if (!hit.highlight)
                hit.highlight = QualityHighlight{QualityScope::attribute, a.attribute, *a.concepts.begin(),
                                                 {range.characteristic, *v}};
            hit.matched_attributes.push_back(std::move(a));
        }
        if (hit.highlight) result.hits.push_back(std::move(hit));
    }
    return result;
}

std::vector<CollectionHit> refine_by_quality(const std::vector<CollectionHit>& hits, const QualityRange& range,
                                             QualityScope scope, const RepositoryState& repo) {
    validate(range);
    std::vector<CollectionHit> out;
    for (const auto& h : hits) {
        const auto* rec = repo.find(h.key);
        if (!rec) continue;
        if (scope == QualityScope::collection) {
            auto v = value_of(rec->quality, range.characteristic);
            if (!v || !range.contains(*v)) continue;
            auto kept = h;
            kept.highlight = QualityHighlight{QualityScope::collection, {}, std::nullopt, {range.characteristic, *v}};
            out.push_back(std::move(kept));
            continue;
        }
        for (const auto& a : h.matched_attributes) {
            const auto* attr = rec->attribute(a.attribute);
            if (!attr) continue;
            auto v = value_of(attr->quality, range.characteristic);
            if (!v || !range.contains(*v)) continue;
            auto kept = h;
            std::optional<ConceptId> shown;
            if (!a.concepts.empty()) shown = *a.concepts.begin();
            kept.highlight = QualityHighlight{QualityScope::attribute, a.attribute, shown, {range.characteristic, *v}};
            out.push_back(std::move(kept));
            break;
        }
    }
    return out;
}

std::vector<ConceptSuggestion> suggest_concepts(const std::string& prefix, std::size_t limit,
                                                const RepositoryState& repo) {
    if (limit == 0) throw InvalidQuery("invalid_query", "limit must be at least 1");
    const auto& store = repo.store();
    std::vector<ConceptSuggestion> out;
    for (const auto& [id, refs] : repo.concept_index()) {
        const auto& c = store.at(id);
        if (detail::starts_with_ci(c.key.code, prefix) || detail::starts_with_ci(c.name, prefix))
            out.push_back({id, refs.size()});
    }
    std::sort(out.begin(), out.end(), [&](const ConceptSuggestion& a, const ConceptSuggestion& b) {
        if (a.annotation_count != b.annotation_count) return a.annotation_count > b.annotation_count;
        const auto& na = store.at(a.concept_id).name;
        const auto& nb = store.at(b.concept_id).name;
        if (na != nb) return na < nb;
        return a.concept_id < b.concept_id;
    });
    if (out.size() > limit) out.resize(limit);
    return out;
}

} // namespace colloc
