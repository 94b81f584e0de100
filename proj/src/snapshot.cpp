#include "colloc/repository.hpp"

#include <nlohmann/json.hpp>

#include <initializer_list>

namespace colloc {

using nlohmann::json;

namespace {

json quality_to_json(const QualityMap& q) {
    json out = json::object();
    for (const auto& [c, v] : q) out[to_string(c)] = v;
    return out;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw SnapshotError("snapshot " + (path.empty() ? std::string("/") : path) + ": " + what);
}

void require_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed,
                    std::initializer_list<const char*> required) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const auto* a : allowed) known = known || k == a;
        if (!known) fail(path + "/" + k, "unknown field");
    }
    for (const auto* r : required)
        if (!j.contains(r)) fail(path + "/" + r, "missing field");
}

std::string get_string(const json& j, const char* field, const std::string& path) {
    const auto& v = j.at(field);
    if (!v.is_string()) fail(path + "/" + field, "expected a string");
    return v.get<std::string>();
}

const json& get_array(const json& j, const char* field, const std::string& path) {
    const auto& v = j.at(field);
    if (!v.is_array()) fail(path + "/" + field, "expected an array");
    return v;
}

QualityMap quality_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    QualityMap q;
    for (const auto& [k, v] : j.items()) {
        auto c = parse_characteristic(k);
        if (!c || k != to_string(*c)) fail(path + "/" + k, "unknown quality characteristic");
        if (!v.is_number()) fail(path + "/" + k, "expected a number");
        double d = v.get<double>();
        if (!is_fraction(d)) fail(path + "/" + k, "value " + v.dump() + " outside [0,1]");
        q[*c] = d;
    }
    return q;
}

} // namespace

std::string export_snapshot(const RepositoryState& state) {
    json cols = json::array();
    for (const auto& [key, rec] : state.collections()) {
        json attrs = json::array();
        for (const auto& a : rec.attributes) {
            json concepts = json::array();
            for (const auto& k : a.concepts) concepts.push_back({{"code", k.code}, {"vocabulary", k.vocabulary}});
            attrs.push_back({{"name", a.name}, {"concepts", std::move(concepts)}, {"quality", quality_to_json(a.quality)}});
        }
        cols.push_back({{"biobank", rec.biobank},
                        {"name", rec.name},
                        {"description", rec.description},
                        {"quality", quality_to_json(rec.quality)},
                        {"attributes", std::move(attrs)}});
    }
    json doc = {{"collections", std::move(cols)}};
    return doc.dump(2) + "\n";
}

RepositoryState import_snapshot(std::string_view bytes, std::shared_ptr<const VocabularyStore> store) {
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw SnapshotError("snapshot malformed at byte " + std::to_string(e.byte) + ": " + e.what());
    }

    RepositoryState state(std::move(store));
    require_object(doc, "", {"collections"}, {"collections"});
    const auto& cols = get_array(doc, "collections", "");
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const auto path = "/collections/" + std::to_string(i);
        const auto& jc = cols[i];
        require_object(jc, path, {"biobank", "name", "description", "quality", "attributes"},
                       {"biobank", "name", "attributes"});
        CollectionRecord rec;
        rec.biobank = get_string(jc, "biobank", path);
        rec.name = get_string(jc, "name", path);
        if (jc.contains("description")) rec.description = get_string(jc, "description", path);
        if (jc.contains("quality")) rec.quality = quality_from_json(jc.at("quality"), path + "/quality");
        const auto& attrs = get_array(jc, "attributes", path);
        for (std::size_t a = 0; a < attrs.size(); ++a) {
            const auto apath = path + "/attributes/" + std::to_string(a);
            const auto& ja = attrs[a];
            require_object(ja, apath, {"name", "concepts", "quality"}, {"name"});
            AttributeRecord attr;
            attr.name = get_string(ja, "name", apath);
            if (ja.contains("concepts")) {
                const auto& cs = get_array(ja, "concepts", apath);
                for (std::size_t k = 0; k < cs.size(); ++k) {
                    const auto kpath = apath + "/concepts/" + std::to_string(k);
                    require_object(cs[k], kpath, {"code", "vocabulary"}, {"code", "vocabulary"});
                    attr.concepts.insert({get_string(cs[k], "code", kpath), get_string(cs[k], "vocabulary", kpath)});
                }
            }
            if (ja.contains("quality")) attr.quality = quality_from_json(ja.at("quality"), apath + "/quality");
            rec.attributes.push_back(std::move(attr));
        }
        if (state.find(rec.key())) fail(path, "duplicate collection " + to_string(rec.key()));
        try {
            state.upsert_collection(std::move(rec));
        } catch (const RecordRejected& e) {
            fail(path, e.what());
        }
    }
    return state;
}

} // namespace colloc
