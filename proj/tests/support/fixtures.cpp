#include "fixtures.hpp"

#include <algorithm>
#include <sstream>

namespace fixtures {

using namespace colloc;

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

const std::vector<std::string> kRelationshipLabels{"Has scale", "Has system", "Has finding site", "Has method"};

} // namespace

RandomGraph random_graph(Rng& rng, const GraphShape& shape) {
    RandomGraph g;
    std::size_t n = pick(rng, 2, shape.max_concepts);
    std::size_t vocab_count = std::max<std::size_t>(1, shape.vocabularies);
    for (std::size_t i = 0; i < n; ++i) {
        Concept c;
        c.id = ConceptId{static_cast<std::int64_t>(1000 + i * 7)};
        c.key = {"C" + std::to_string(i), "V" + std::to_string(pick(rng, 0, vocab_count - 1))};
        c.name = "concept " + std::to_string(i);
        c.domain = "Observation";
        c.standard = coin(rng, 0.7);
        g.concepts.push_back(c);
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);

    std::set<std::pair<std::size_t, std::size_t>> is_a;
    std::size_t is_a_target = pick(rng, 0, std::min(shape.max_is_a, n * (n - 1) / 2));
    for (std::size_t tries = 0; is_a.size() < is_a_target && tries < is_a_target * 4; ++tries) {
        std::size_t a = pick(rng, 0, n - 1), b = pick(rng, 0, n - 1);
        if (a == b) continue;
        if (a < b) std::swap(a, b);
        is_a.insert({order[a], order[b]}); // later -> earlier
    }
    for (auto [child, parent] : is_a) g.edges.push_back({g.concepts[child].id, kIsA, g.concepts[parent].id});

    std::set<std::pair<std::size_t, std::size_t>> maps;
    std::size_t maps_target = pick(rng, 0, shape.max_maps_to);
    for (std::size_t tries = 0; maps.size() < maps_target && tries < maps_target * 4; ++tries) {
        std::size_t a = pick(rng, 0, n - 1), b = pick(rng, 0, n - 1);
        if (a == b || maps.count({b, a})) continue;
        maps.insert({a, b});
    }
    for (auto [a, b] : maps) g.edges.push_back({g.concepts[a].id, kMapsTo, g.concepts[b].id});

    std::size_t attributing = pick(rng, 0, shape.max_attributing);
    std::set<std::tuple<std::size_t, std::string, std::size_t>> attr;
    for (std::size_t i = 0; i < attributing; ++i) {
        std::size_t c = pick(rng, 0, n - 1), p = pick(rng, 0, std::min<std::size_t>(n - 1, 5));
        if (c == p) continue;
        attr.insert({c, kRelationshipLabels[pick(rng, 0, kRelationshipLabels.size() - 1)], p});
    }
    for (const auto& [c, r, p] : attr) g.edges.push_back({g.concepts[c].id, r, g.concepts[p].id});

    g.store = std::make_shared<const VocabularyStore>(VocabularyStore::build(g.concepts, g.edges));
    return g;
}

std::vector<CollectionRecord> random_records(Rng& rng, const RandomGraph& graph, const RepoShape& shape) {
    std::vector<CollectionRecord> out;
    std::size_t collections = pick(rng, 1, shape.max_collections);
    auto hundredths = [&] { return static_cast<double>(pick(rng, 0, 100)) / 100.0; };
    auto quality = [&] {
        QualityMap q;
        for (auto c : kAllCharacteristics)
            if (!coin(rng, shape.missing_quality_rate)) q[c] = hundredths();
        return q;
    };
    for (std::size_t i = 0; i < collections; ++i) {
        CollectionRecord rec;
        rec.biobank = coin(rng, 0.5) ? "BB-A" : "BB-B";
        rec.name = "COL" + std::to_string(i);
        if (coin(rng, 0.5)) rec.description = "cohort " + std::to_string(i) + ", \"quoted\" part";
        rec.quality = quality();
        std::size_t attrs = pick(rng, 1, shape.max_attributes);
        for (std::size_t a = 0; a < attrs; ++a) {
            AttributeRecord attr;
            attr.name = "attr_" + std::to_string(a);
            std::size_t k = pick(rng, 1, shape.max_concepts_per_attribute);
            for (std::size_t j = 0; j < k; ++j) {
                if (coin(rng, shape.unresolved_rate)) {
                    attr.concepts.insert({"UNKNOWN" + std::to_string(pick(rng, 0, 9)), "V0"});
                } else {
                    attr.concepts.insert(graph.concepts[pick(rng, 0, graph.concepts.size() - 1)].key);
                }
            }
            attr.quality = quality();
            rec.attributes.push_back(std::move(attr));
        }
        out.push_back(std::move(rec));
    }
    return out;
}

RepositoryState state_of(const std::vector<CollectionRecord>& records, std::shared_ptr<const VocabularyStore> store) {
    RepositoryState state(std::move(store));
    for (const auto& r : records) state.upsert_collection(r);
    return state;
}

std::shared_ptr<const VocabularyStore> store_from_tables(const std::string& concept_table,
                                                         const std::string& relationship_table) {
    std::istringstream c(concept_table), r(relationship_table);
    auto load = load_vocabulary(c, r);
    return std::make_shared<const VocabularyStore>(std::move(load.store));
}

const LoadedScenario& default_scenario() {
    static const LoadedScenario loaded = [] {
        LoadedScenario s;
        s.files = generate_scenario(ScenarioSpec{});
        s.ledger = nlohmann::json::parse(s.files.ledger_json);
        s.store = store_from_tables(s.files.concept_table, s.files.relationship_table);
        return s;
    }();
    return loaded;
}

std::vector<std::string> names(const std::vector<CollectionKey>& keys) {
    std::vector<std::string> out;
    for (const auto& k : keys) out.push_back(k.name);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> sorted_strings(const nlohmann::json& array) {
    auto out = array.get<std::vector<std::string>>();
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace fixtures
