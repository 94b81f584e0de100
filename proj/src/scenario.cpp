#include "colloc/scenario.hpp"

#include "colloc/error.hpp"
#include "colloc/ingest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace colloc {

using nlohmann::json;

namespace {

struct VocabInfo {
    const char* id;
    const char* code_prefix;
    const char* domain;
};

// LOINC first: the attributing-relationship cluster lives there.
constexpr std::array<VocabInfo, 6> kVocabularies{{
    {"LOINC", "LNC", "Measurement"},
    {"SNOMED", "SCT", "Condition"},
    {"HCPCS", "HCP", "Procedure"},
    {"Cancer Modifier", "CMO", "Measurement"},
    {"RxNorm", "RXN", "Drug"},
    {"Nebraska Lexicon", "NEB", "Observation"},
}};

constexpr std::array<const char*, 22> kAttributeNames{
    "bmi",          "age_at_diagnosis", "sex",          "height",       "weight",         "tumor_site",
    "histology",    "grading",          "t_stage",      "n_stage",      "m_stage",        "cea_level",
    "hemoglobin",   "liver_imaging",    "colonoscopy",  "surgery_type", "chemotherapy",   "radiotherapy",
    "smoking",      "alcohol_use",      "diabetes",     "survival_months"};

// Planted annotating concepts.
constexpr std::size_t kReserved = 6;

struct GenConcept {
    std::int64_t id = 0;
    std::string code;
    std::string vocabulary;
    std::string name;
    std::string domain;
    std::string concept_class;
    bool standard = true;
    std::string role; // "annotating", "planted", "parent", "attributing"
};

struct GenEdge {
    std::size_t source;
    std::string relationship;
    std::size_t target;
};

struct Slot {
    std::size_t collection;
    std::size_t attribute;
    auto operator<=>(const Slot&) const = default;
};

std::string vocabulary_name(std::size_t i) {
    return i < kVocabularies.size() ? kVocabularies[i].id : "Vocabulary " + std::to_string(i + 1);
}

std::string attribute_name(std::size_t i) {
    return i < kAttributeNames.size() ? kAttributeNames[i] : "attribute_" + std::to_string(i + 1);
}

std::string collection_name(std::size_t i) { return "CRC" + std::to_string(i + 1); }

class Generator {
public:
    explicit Generator(const ScenarioSpec& spec) : spec_(spec), rng_(spec.seed) {}

    Scenario run() {
        make_concepts();
        plant_annotations();
        random_annotations();
        random_structure();
        plant_quality();
        Scenario s;
        s.concept_table = concept_table();
        s.relationship_table = relationship_table();
        s.annotations_csv = annotation_file();
        s.ledger_json = ledger().dump(2) + "\n";
        return s;
    }

private:
    std::size_t uniform(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    double hundredths(std::size_t lo, std::size_t hi) { return static_cast<double>(uniform(lo, hi)) / 100.0; }

    std::size_t vocab_index(std::size_t preferred) const { return preferred % spec_.vocabularies; }

    std::size_t add_concept(std::size_t vocab, std::string name, std::string role, std::string code = {},
                            std::string domain = {}, std::string concept_class = "Clinical Finding") {
        GenConcept c;
        c.id = 4000001 + static_cast<std::int64_t>(concepts_.size());
        c.vocabulary = vocabulary_name(vocab);
        const char* prefix = vocab < kVocabularies.size() ? kVocabularies[vocab].code_prefix : "VOC";
        c.code = code.empty() ? std::string(prefix) + "-" + std::to_string(10000 + concepts_.size()) : std::move(code);
        c.name = std::move(name);
        c.domain = !domain.empty() ? std::move(domain)
                   : vocab < kVocabularies.size() ? kVocabularies[vocab].domain
                                                  : "Observation";
        c.concept_class = std::move(concept_class);
        c.role = std::move(role);
        concepts_.push_back(std::move(c));
        return concepts_.size() - 1;
    }

    void make_concepts() {
        bmi_ = add_concept(0, "Body mass index (BMI) [Ratio]", "planted", "39156-5", "Measurement", "Clinical Observation");
        crc3_child_ = add_concept(vocab_index(1), "Mucinous adenocarcinoma of sigmoid colon", "planted");
        liver_us_ = add_concept(vocab_index(1), "Ultrasonography of liver", "planted", {}, "Procedure", "Procedure");
        liver_xray_ = add_concept(vocab_index(2), "Plain X-ray of liver soft tissue", "planted", {}, "Procedure", "Procedure");
        chain_mid_ = add_concept(vocab_index(5), "Metastatic lesion of liver", "planted");
        chain_leaf_ = add_concept(vocab_index(5), "Solitary metastatic lesion of liver", "planted");

        const std::size_t k = spec_.concepts - kReserved;
        for (std::size_t i = 0; i < k; ++i) {
            auto v = i % spec_.vocabularies;
            auto idx = add_concept(v, vocabulary_name(v) + " concept " + std::to_string(i + 1), "annotating");
            free_.push_back(idx);
            free_by_vocab_[v].push_back(idx);
        }

        crc3_parent_ = add_concept(vocab_index(1), "Adenocarcinoma of colon", "parent");
        chain_root_ = add_concept(0, "Liver lesion finding panel", "parent", {}, "Measurement", "Clinical Observation");

        for (const char* s : {"Nom", "Qn", "Ord"}) scales_.push_back(add_concept(0, s, "attributing", std::string("LP-") + s, "Meas Value", "LOINC Scale"));
        for (const char* s : {"Bld", "Ser/Plas", "^Patient"})
            systems_.push_back(add_concept(0, s, "attributing", std::string("LP-SYS-") + s, "Meas Value", "LOINC System"));
        for (const char* s : {"Automated count", "Estimated"})
            methods_.push_back(add_concept(0, s, "attributing", std::string("LP-MTH-") + s, "Meas Value", "LOINC Method"));
        if (spec_.vocabularies > 1)
            for (const char* s : {"Colon structure", "Liver structure", "Rectum structure"})
                sites_.push_back(add_concept(1, s, "attributing", {}, "Spec Anatomic Site", "Body Structure"));
    }

    std::size_t coll(std::size_t i) const { return i % spec_.collections; }
    std::size_t attr(std::size_t i) const { return i % spec_.attributes_per_collection; }

    void annotate(std::size_t c, std::size_t a, std::size_t ci) { annotations_[{c, a}].insert(ci); }

    void plant_annotations() {
        for (std::size_t c = 0; c < spec_.collections; ++c) annotate(c, attr(0), bmi_);
        annotate(coll(2), attr(6), crc3_child_);
        for (auto c : {1, 4}) annotate(coll(c), attr(13), liver_us_);
        for (auto c : {4, 6}) annotate(coll(c), attr(13), liver_xray_);
        for (auto c : {0, 3}) annotate(coll(c), attr(5), chain_mid_);
        annotate(coll(7), attr(5), chain_leaf_);

        // Planted edges: descent-only, maps-to-then-descent.
        edges_.push_back({crc3_child_, "Is a", crc3_parent_});
        edges_.push_back({chain_root_, "Maps to", chain_mid_});
        edges_.push_back({chain_leaf_, "Is a", chain_mid_});
    }

    std::size_t annotation_count() const {
        std::size_t n = 0;
        for (const auto& [slot, cs] : annotations_) n += cs.size();
        return n;
    }

    void random_annotations() {
        std::vector<Slot> open;
        for (std::size_t c = 0; c < spec_.collections; ++c)
            for (std::size_t a = 0; a < spec_.attributes_per_collection; ++a)
                if (!annotations_.count({c, a})) open.push_back({c, a});
        std::shuffle(open.begin(), open.end(), rng_);
        auto pool = free_;
        std::shuffle(pool.begin(), pool.end(), rng_);

        // Cover every open slot and every free concept at least once.
        const auto cover = std::max(open.size(), pool.size());
        for (std::size_t i = 0; i < cover; ++i) {
            Slot s = open.empty() ? Slot{uniform(0, spec_.collections - 1), uniform(0, spec_.attributes_per_collection - 1)}
                                  : open[i % open.size()];
            annotate(s.collection, s.attribute, pool[i % pool.size()]);
        }
        while (annotation_count() < spec_.annotations) {
            Slot s{uniform(0, spec_.collections - 1), uniform(0, spec_.attributes_per_collection - 1)};
            annotate(s.collection, s.attribute, pool[uniform(0, pool.size() - 1)]);
        }
    }

    void random_structure() {
        // Hierarchy within each vocabulary; parents always precede children.
        for (auto& [v, members] : free_by_vocab_)
            for (std::size_t j = 1; j < members.size(); ++j)
                if (chance(0.4)) edges_.push_back({members[j], "Is a", members[uniform(0, j - 1)]});

        // Cross-vocabulary equivalences.
        if (spec_.vocabularies > 1) {
            const std::size_t pairs = std::min<std::size_t>(12, free_.size() / 6);
            std::set<std::pair<std::size_t, std::size_t>> seen;
            for (std::size_t tries = 0; seen.size() < pairs && tries < 1000; ++tries) {
                auto a = free_[uniform(0, free_.size() - 1)];
                auto b = free_[uniform(0, free_.size() - 1)];
                if (concepts_[a].vocabulary == concepts_[b].vocabulary) continue;
                if (!seen.insert({std::min(a, b), std::max(a, b)}).second) continue;
                edges_.push_back({a, "Maps to", b});
            }
        }

        // Attributing relationships: every LOINC annotating concept has a
        // scale; the first free one is nominal so the cluster is never empty.
        bool nominal_planted = false;
        for (std::size_t i = 0; i < concepts_.size(); ++i) {
            const auto& c = concepts_[i];
            if (c.role == "attributing" || c.role == "parent") continue;
            if (c.vocabulary == vocabulary_name(0)) {
                std::size_t scale;
                if (i == bmi_) scale = scales_[1];
                else if (!nominal_planted && c.role == "annotating") {
                    scale = scales_[0];
                    nominal_planted = true;
                } else scale = scales_[uniform(0, scales_.size() - 1)];
                edges_.push_back({i, "Has scale", scale});
                if (chance(0.6)) edges_.push_back({i, "Has system", systems_[uniform(0, systems_.size() - 1)]});
                if (chance(0.3)) edges_.push_back({i, "Has method", methods_[uniform(0, methods_.size() - 1)]});
            } else if (!sites_.empty() && c.vocabulary == vocabulary_name(1) && chance(0.3)) {
                edges_.push_back({i, "Has finding site", sites_[uniform(0, sites_.size() - 1)]});
            }
        }
    }

    void plant_quality() {
        for (std::size_t c = 0; c < spec_.collections; ++c) {
            collection_completeness_[c] = hundredths(30, 100);
            for (std::size_t a = 0; a < spec_.attributes_per_collection; ++a) {
                double v;
                if (a == attr(0)) v = c == 0 ? 0.85 : c == 1 ? 0.40 : hundredths(5, 45);
                else v = hundredths(5, 100);
                attribute_completeness_[{c, a}] = v;
            }
        }
    }

    std::vector<CollectionRecord> records() const {
        std::vector<CollectionRecord> out;
        for (std::size_t c = 0; c < spec_.collections; ++c) {
            CollectionRecord rec;
            rec.biobank = "BBG";
            rec.name = collection_name(c);
            rec.description = "Synthetic colorectal cancer cohort partition " + std::to_string(c + 1) + " of " +
                              std::to_string(spec_.collections);
            rec.quality[QualityCharacteristic::completeness] = collection_completeness_.at(c);
            for (std::size_t a = 0; a < spec_.attributes_per_collection; ++a) {
                AttributeRecord ar;
                ar.name = attribute_name(a);
                for (auto ci : annotations_.at({c, a})) ar.concepts.insert({concepts_[ci].code, concepts_[ci].vocabulary});
                ar.quality[QualityCharacteristic::completeness] = attribute_completeness_.at({c, a});
                rec.attributes.push_back(std::move(ar));
            }
            out.push_back(std::move(rec));
        }
        return out;
    }

    std::string concept_table() const {
        std::ostringstream out;
        out << "concept_id\tconcept_name\tdomain_id\tvocabulary_id\tconcept_class_id\tstandard_concept\tconcept_code\n";
        for (const auto& c : concepts_)
            out << c.id << '\t' << c.name << '\t' << c.domain << '\t' << c.vocabulary << '\t' << c.concept_class << '\t'
                << (c.standard ? "S" : "") << '\t' << c.code << '\n';
        return out.str();
    }

    std::string relationship_table() const {
        std::ostringstream out;
        out << "concept_id_1\tconcept_id_2\trelationship_id\n";
        for (const auto& e : edges_)
            out << concepts_[e.source].id << '\t' << concepts_[e.target].id << '\t' << e.relationship << '\n';
        return out.str();
    }

    std::string annotation_file() const { return serialize_annotation_file(records()); }

    json key_json(std::size_t i) const { return {{"code", concepts_[i].code}, {"vocabulary", concepts_[i].vocabulary}}; }

    std::set<std::size_t> collections_of(std::size_t ci) const {
        std::set<std::size_t> out;
        for (const auto& [slot, cs] : annotations_)
            if (cs.count(ci)) out.insert(slot.collection);
        return out;
    }

    json names(const std::set<std::size_t>& cs) const {
        json out = json::array();
        for (auto c : cs) out.push_back(collection_name(c));
        return out;
    }

    json planted_query(const std::string& name, std::vector<std::size_t> seeds, const char* op,
                       const std::set<std::size_t>& expected, const std::set<std::size_t>& expected_unexpanded) const {
        json s = json::array();
        for (auto i : seeds) s.push_back(key_json(i));
        return {{"name", name},
                {"seeds", std::move(s)},
                {"operator", op},
                {"expected", names(expected)},
                {"expected_without_expansion", names(expected_unexpanded)}};
    }

    json ledger() const {
        json doc;
        doc["spec"] = {{"collections", spec_.collections},
                       {"attributes_per_collection", spec_.attributes_per_collection},
                       {"concepts", spec_.concepts},
                       {"vocabularies", spec_.vocabularies},
                       {"annotations", spec_.annotations},
                       {"patients", spec_.patients},
                       {"seed", spec_.seed}};

        std::set<std::size_t> used;
        std::set<std::string> used_vocabs;
        for (const auto& [slot, cs] : annotations_)
            for (auto c : cs) {
                used.insert(c);
                used_vocabs.insert(concepts_[c].vocabulary);
            }
        doc["totals"] = {{"collections", spec_.collections},
                         {"attributes", spec_.collections * spec_.attributes_per_collection},
                         {"attributes_per_collection", spec_.attributes_per_collection},
                         {"distinct_concepts", used.size()},
                         {"vocabularies", used_vocabs.size()},
                         {"annotations", annotation_count()},
                         {"patients", spec_.patients},
                         {"vocabulary_concepts", concepts_.size()},
                         {"vocabulary_edges", edges_.size()}};

        json concepts = json::array();
        for (const auto& c : concepts_)
            concepts.push_back({{"id", c.id},
                                {"code", c.code},
                                {"vocabulary", c.vocabulary},
                                {"name", c.name},
                                {"role", c.role}});
        doc["concepts"] = std::move(concepts);

        json edges = json::array();
        std::map<std::string, std::set<std::string>> labels;
        for (const auto& e : edges_) {
            edges.push_back({{"source", concepts_[e.source].id},
                             {"relationship", e.relationship},
                             {"target", concepts_[e.target].id}});
            if (e.relationship != "Is a" && e.relationship != "Maps to")
                labels[concepts_[e.source].vocabulary].insert(e.relationship);
        }
        doc["edges"] = std::move(edges);
        doc["relationships_by_vocabulary"] = labels;

        json ann = json::array();
        for (const auto& [slot, cs] : annotations_)
            for (auto c : cs)
                ann.push_back({{"collection", collection_name(slot.collection)},
                               {"attribute", attribute_name(slot.attribute)},
                               {"code", concepts_[c].code},
                               {"vocabulary", concepts_[c].vocabulary}});
        doc["annotations"] = std::move(ann);

        json quality = json::object();
        for (std::size_t c = 0; c < spec_.collections; ++c) {
            json attrs = json::object();
            for (std::size_t a = 0; a < spec_.attributes_per_collection; ++a)
                attrs[attribute_name(a)] = attribute_completeness_.at({c, a});
            quality[collection_name(c)] = {{"completeness", collection_completeness_.at(c)}, {"attributes", std::move(attrs)}};
        }
        doc["quality"] = std::move(quality);

        // Planted queries. Every planted concept is reachable only through the
        // planted edges, so the expected sets follow from the planted
        // annotations alone.
        auto crc3 = collections_of(crc3_child_);
        auto us = collections_of(liver_us_);
        auto xr = collections_of(liver_xray_);
        std::set<std::size_t> us_or_xr = us, us_and_xr;
        us_or_xr.insert(xr.begin(), xr.end());
        std::set_intersection(us.begin(), us.end(), xr.begin(), xr.end(), std::inserter(us_and_xr, us_and_xr.end()));
        auto chain = collections_of(chain_mid_);
        auto leaf = collections_of(chain_leaf_);
        chain.insert(leaf.begin(), leaf.end());
        auto bmi = collections_of(bmi_);

        json queries = json::array();
        queries.push_back(planted_query("descendant_only", {crc3_parent_}, "OR", crc3, {}));
        queries.push_back(planted_query("liver_imaging_or", {liver_us_, liver_xray_}, "OR", us_or_xr, us_or_xr));
        queries.push_back(planted_query("liver_imaging_and", {liver_us_, liver_xray_}, "AND", us_and_xr, us_and_xr));
        queries.push_back(planted_query("maps_to_then_descend", {chain_root_}, "OR", chain, {}));
        queries.push_back(planted_query("bmi", {bmi_}, "OR", bmi, bmi));
        doc["planted_queries"] = std::move(queries);

        doc["crc3_only_concept"] = key_json(crc3_parent_);
        doc["crc3_only_collection"] = collection_name(coll(2));

        // Refinements applied to planted query results.
        std::set<std::size_t> bmi_refined;
        for (auto c : bmi)
            if (attribute_completeness_.at({c, attr(0)}) >= 0.5) bmi_refined.insert(c);
        std::set<std::size_t> liver_refined;
        for (auto c : us_or_xr)
            if (collection_completeness_.at(c) >= 0.5) liver_refined.insert(c);
        doc["refinements"] = json::array(
            {{{"query", "bmi"},
              {"scope", "attribute"},
              {"characteristic", "completeness"},
              {"min", 0.5},
              {"max", 1.0},
              {"expected", names(bmi_refined)}},
             {{"query", "liver_imaging_or"},
              {"scope", "collection"},
              {"characteristic", "completeness"},
              {"min", 0.5},
              {"max", 1.0},
              {"expected", names(liver_refined)}}});

        json bmi_example = {{"concept", key_json(bmi_)},
                            {"attribute", attribute_name(attr(0))},
                            {"high", {{"collection", collection_name(0)}, {"completeness", attribute_completeness_.at({0, attr(0)})}}},
                            {"characteristic", "completeness"},
                            {"min", 0.5},
                            {"max", 1.0},
                            {"expected", names(bmi_refined)}};
        if (spec_.collections > 1)
            bmi_example["low"] = {{"collection", collection_name(1)},
                                  {"completeness", attribute_completeness_.at({1, attr(0)})}};
        doc["bmi_quality_example"] = std::move(bmi_example);

        // Nominal-scale LOINC cluster for relationship search.
        std::set<std::size_t> nominal;
        for (const auto& e : edges_)
            if (e.relationship == "Has scale" && e.target == scales_[0]) nominal.insert(e.source);
        std::set<std::size_t> nominal_collections;
        json nominal_codes = json::array();
        for (auto c : nominal) {
            nominal_codes.push_back(key_json(c));
            auto cs = collections_of(c);
            nominal_collections.insert(cs.begin(), cs.end());
        }
        doc["has_scale_nom"] = {{"vocabulary", vocabulary_name(0)},
                                {"relationship", "Has scale"},
                                {"attributing", key_json(scales_[0])},
                                {"concepts", std::move(nominal_codes)},
                                {"expected", names(nominal_collections)}};
        return doc;
    }

    const ScenarioSpec& spec_;
    std::mt19937_64 rng_;
    std::vector<GenConcept> concepts_;
    std::vector<GenEdge> edges_;
    std::vector<std::size_t> free_;
    std::map<std::size_t, std::vector<std::size_t>> free_by_vocab_;
    std::vector<std::size_t> scales_, systems_, methods_, sites_;
    std::map<Slot, std::set<std::size_t>> annotations_;
    std::map<std::size_t, double> collection_completeness_;
    std::map<Slot, double> attribute_completeness_;
    std::size_t bmi_ = 0, crc3_child_ = 0, crc3_parent_ = 0, liver_us_ = 0, liver_xray_ = 0, chain_root_ = 0,
                chain_mid_ = 0, chain_leaf_ = 0;
};

// Annotations fixed before random filling, and the slots they cover.
std::pair<std::size_t, std::size_t> planted_footprint(const ScenarioSpec& spec) {
    std::set<std::tuple<std::size_t, std::size_t, int>> ann;
    auto c = [&](std::size_t i) { return i % spec.collections; };
    auto a = [&](std::size_t i) { return i % spec.attributes_per_collection; };
    for (std::size_t i = 0; i < spec.collections; ++i) ann.insert({i, a(0), 0});
    ann.insert({c(2), a(6), 1});
    for (auto i : {1, 4}) ann.insert({c(i), a(13), 2});
    for (auto i : {4, 6}) ann.insert({c(i), a(13), 3});
    for (auto i : {0, 3}) ann.insert({c(i), a(5), 4});
    ann.insert({c(7), a(5), 5});
    std::set<std::pair<std::size_t, std::size_t>> slots;
    for (const auto& [ci, ai, k] : ann) slots.insert({ci, ai});
    return {ann.size(), slots.size()};
}

} // namespace

std::vector<std::string> validate(const ScenarioSpec& spec) {
    std::vector<std::string> problems;
    if (spec.collections == 0) problems.push_back("collections must be >= 1");
    if (spec.attributes_per_collection == 0) problems.push_back("attributes per collection must be >= 1");
    if (spec.vocabularies == 0) problems.push_back("vocabularies must be >= 1");
    if (!problems.empty()) return problems;
    if (spec.concepts < kReserved + spec.vocabularies)
        problems.push_back("concepts must be >= " + std::to_string(kReserved + spec.vocabularies) +
                           " (planted concepts plus one per vocabulary)");
    const auto slots = spec.collections * spec.attributes_per_collection;
    if (spec.annotations < slots) problems.push_back("annotations must be >= number of attributes");
    if (spec.concepts > spec.annotations) problems.push_back("concepts must be <= annotations");
    if (!problems.empty()) return problems;

    auto [planted, covered] = planted_footprint(spec);
    const auto free_concepts = spec.concepts - kReserved;
    const auto min_annotations = planted + std::max(slots - covered, free_concepts);
    const auto max_annotations = planted + slots * free_concepts;
    if (spec.annotations < min_annotations)
        problems.push_back("annotations must be >= " + std::to_string(min_annotations) + " for this shape");
    if (spec.annotations > max_annotations)
        problems.push_back("annotations must be <= " + std::to_string(max_annotations) + " for this shape");
    return problems;
}

Scenario generate_scenario(const ScenarioSpec& spec) {
    auto problems = validate(spec);
    if (!problems.empty()) {
        std::string msg = "inconsistent scenario";
        for (const auto& p : problems) msg += "; " + p;
        throw Error(msg);
    }
    return Generator(spec).run();
}

void write_scenario(const Scenario& scenario, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const char* name, const std::string& content) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + (dir / name).string());
        out << content;
    };
    write(kConceptFile, scenario.concept_table);
    write(kRelationshipFile, scenario.relationship_table);
    write(kAnnotationFile, scenario.annotations_csv);
    write(kLedgerFile, scenario.ledger_json);
}

} // namespace colloc
