#include "colloc/json_codec.hpp"

namespace colloc::codec {

json to_json(const Concept& c) {
    return {{"id", to_int(c.id)},     {"code", c.key.code},   {"vocabulary", c.key.vocabulary},
            {"name", c.name},         {"domain", c.domain},   {"standard", c.standard}};
}

json to_json(const ConceptKey& k) { return {{"code", k.code}, {"vocabulary", k.vocabulary}}; }

json to_json(const QualityMap& q) {
    json out = json::object();
    for (const auto& [c, v] : q) out[to_string(c)] = v;
    return out;
}

json to_json(const CollectionHit& hit, const VocabularyStore& store) {
    json attrs = json::array();
    for (const auto& a : hit.matched_attributes) {
        json concepts = json::array();
        for (auto c : a.concepts) concepts.push_back(to_json(store.at(c)));
        attrs.push_back({{"attribute", a.attribute}, {"concepts", std::move(concepts)}});
    }
    json highlight = nullptr;
    if (hit.highlight) {
        const auto& h = *hit.highlight;
        highlight = {{"scope", to_string(h.scope)},
                     {"characteristic", to_string(h.value.characteristic)},
                     {"value", h.value.value}};
        if (h.scope == QualityScope::attribute) {
            highlight["attribute"] = h.attribute;
            highlight["concept"] = h.concept_id ? to_json(store.at(*h.concept_id)) : json(nullptr);
        }
    }
    return {{"biobank", hit.key.biobank},
            {"collection", hit.key.name},
            {"matched_attributes", std::move(attrs)},
            {"highlight", std::move(highlight)}};
}

json to_json(const SearchResult& result, const VocabularyStore& store) {
    json hits = json::array();
    for (const auto& h : result.hits) hits.push_back(to_json(h, store));
    return {{"count", result.hits.size()}, {"hits", std::move(hits)}, {"warnings", result.warnings}};
}

json to_json(const Diagnostic& d) {
    return {{"line", d.line}, {"severity", to_string(d.severity)}, {"message", d.message}};
}

json to_json(const IngestReport& report) {
    json diags = json::array();
    for (const auto& d : report.diagnostics) diags.push_back(to_json(d));
    return {{"accepted_rows", report.accepted_rows},
            {"collections_touched", report.collections_touched},
            {"diagnostics", std::move(diags)}};
}

json to_json(const std::vector<ConceptSuggestion>& suggestions, const VocabularyStore& store) {
    json out = json::array();
    for (const auto& s : suggestions)
        out.push_back({{"concept", to_json(store.at(s.concept_id))}, {"count", s.annotation_count}});
    return {{"suggestions", std::move(out)}};
}

json summary_json(const CollectionRecord& rec) {
    return {{"biobank", rec.biobank},
            {"name", rec.name},
            {"description", rec.description},
            {"attribute_count", rec.attributes.size()},
            {"quality", to_json(rec.quality)}};
}

json detail_json(const CollectionRecord& rec, const RepositoryState& repo) {
    const auto& store = repo.store();
    json attrs = json::array();
    for (const auto& a : rec.attributes) {
        json concepts = json::array();
        json unresolved = json::array();
        for (const auto& k : a.concepts) {
            if (const auto* c = store.find(k)) concepts.push_back(to_json(*c));
            else unresolved.push_back(to_json(k));
        }
        attrs.push_back({{"name", a.name},
                         {"concepts", std::move(concepts)},
                         {"unresolved", std::move(unresolved)},
                         {"quality", to_json(a.quality)}});
    }
    auto out = summary_json(rec);
    out["attributes"] = std::move(attrs);
    return out;
}

json error_json(int status, const std::string& code, const std::string& message,
                const std::vector<std::string>& details) {
    json out = {{"status", status}, {"code", code}, {"message", message}};
    if (!details.empty()) out["details"] = details;
    return out;
}

ConceptKey concept_key_from_json(const json& j, const char* field) {
    if (!j.is_object())
        throw InvalidQuery("invalid_query", std::string(field) + " must be an object {code, vocabulary}");
    auto code = j.find("code");
    auto vocab = j.find("vocabulary");
    if (code == j.end() || vocab == j.end() || !code->is_string() || !vocab->is_string())
        throw InvalidQuery("invalid_query", std::string(field) + " needs string fields code and vocabulary");
    return {code->get<std::string>(), vocab->get<std::string>()};
}

QualityRange quality_range_from_json(const json& j) {
    QualityRange r;
    auto ch = j.find("characteristic");
    if (ch == j.end() || !ch->is_string())
        throw InvalidQuery("invalid_query", "characteristic must be a string");
    auto c = parse_characteristic(ch->get<std::string>());
    if (!c) throw InvalidQuery("invalid_query", "unknown quality characteristic '" + ch->get<std::string>() + "'");
    r.characteristic = *c;
    auto number = [&](const char* name, double fallback) {
        auto it = j.find(name);
        if (it == j.end() || it->is_null()) return fallback;
        if (!it->is_number()) throw InvalidQuery("invalid_query", std::string(name) + " must be a number");
        return it->get<double>();
    };
    r.min = number("min", 0.0);
    r.max = number("max", 1.0);
    validate(r);
    return r;
}

} // namespace colloc::codec
