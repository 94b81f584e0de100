#include "colloc/service.hpp"

#include "colloc/ingest.hpp"
#include "colloc/json_codec.hpp"
#include "colloc/search.hpp"
#include "text_util.hpp"

#include <fstream>
#include <map>
#include <mutex>

namespace colloc {

using codec::json;

namespace {

struct ApiFailure {
    int status;
    std::string code;
    std::string message;
    std::vector<std::string> details;
};

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string percent_decode(std::string_view s, bool plus_is_space) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '%' && i + 2 < s.size()) {
            int hi = hex_value(s[i + 1]);
            int lo = hex_value(s[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(plus_is_space && c == '+' ? ' ' : c);
    }
    return out;
}

struct Target {
    std::vector<std::string> segments;
    std::map<std::string, std::string> query;
};

Target parse_target(std::string_view target) {
    Target t;
    auto q = target.find('?');
    auto path = target.substr(0, q);
    if (q != std::string_view::npos) {
        for (const auto& pair : detail::split(target.substr(q + 1), '&')) {
            if (pair.empty()) continue;
            auto eq = pair.find('=');
            auto k = percent_decode(pair.substr(0, eq), true);
            auto v = eq == std::string::npos ? std::string{} : percent_decode(pair.substr(eq + 1), true);
            t.query.emplace(std::move(k), std::move(v));
        }
    }
    for (const auto& seg : detail::split(path, '/'))
        if (!seg.empty()) t.segments.push_back(percent_decode(seg, false));
    return t;
}

HttpResponse ok(const json& body) { return {200, body.dump(), "application/json"}; }

HttpResponse failure(const ApiFailure& f) {
    return {f.status, codec::error_json(f.status, f.code, f.message, f.details).dump(), "application/json"};
}

json parse_body(const std::string& body) {
    try {
        auto j = json::parse(body);
        if (!j.is_object()) throw ApiFailure{400, "invalid_json", "request body must be a JSON object", {}};
        return j;
    } catch (const json::parse_error& e) {
        throw ApiFailure{400, "invalid_json", "request body is not valid JSON", {e.what()}};
    }
}

bool bool_field(const json& j, const char* name, bool fallback) {
    auto it = j.find(name);
    if (it == j.end() || it->is_null()) return fallback;
    if (!it->is_boolean()) throw InvalidQuery("invalid_query", std::string(name) + " must be a boolean");
    return it->get<bool>();
}

std::string string_field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end() || !it->is_string()) throw InvalidQuery("invalid_query", std::string(name) + " must be a string");
    return it->get<std::string>();
}

ConceptId require_concept(const VocabularyStore& store, const ConceptKey& key) {
    const auto* c = store.find(key);
    if (!c) throw ApiFailure{400, "unknown_concept", "concept " + to_string(key) + " not found in vocabulary", {}};
    return c->id;
}

void write_snapshot(const std::filesystem::path& path, const Repository& repo) {
    static std::mutex write_mutex;
    std::lock_guard lock(write_mutex);
    auto state = repo.snapshot();
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write snapshot " + tmp.string());
        out << export_snapshot(*state);
    }
    std::filesystem::rename(tmp, path);
}

class Router {
public:
    Router(const Service& service, const ServiceOptions& options) : service_(service), options_(options) {}

    HttpResponse route(const HttpRequest& req) {
        auto t = parse_target(req.target);
        auto& s = t.segments;
        if (s.size() == 1 && s[0] == "health") return get_only(req, [&] { return health(); });
        if (s.size() < 3 || s[0] != "api" || s[1] != "v1")
            throw ApiFailure{404, "not_found", "no route for " + req.target, {}};
        s.erase(s.begin(), s.begin() + 2);

        if (s == std::vector<std::string>{"health"}) return get_only(req, [&] { return health(); });
        if (s[0] == "collections") {
            if (s.size() == 2 && s[1] == "import") return post_only(req, [&] { return import(req.body); });
            if (s.size() == 1) return get_only(req, [&] { return list_collections(); });
            if (s.size() == 3) return get_only(req, [&] { return collection_detail(s[1], s[2]); });
        }
        if (s[0] == "search") {
            if (s.size() == 2 && s[1] == "concepts") return post_only(req, [&] { return search_concepts(req.body); });
            if (s.size() == 2 && s[1] == "relationship")
                return post_only(req, [&] { return search_relationship(req.body); });
            if (s.size() == 3 && s[1] == "quality" && s[2] == "collection")
                return post_only(req, [&] { return search_collection_quality(req.body); });
            if (s.size() == 3 && s[1] == "quality" && s[2] == "attribute")
                return post_only(req, [&] { return search_attribute_quality(req.body); });
        }
        if (s.size() == 2 && s[0] == "concepts" && s[1] == "suggest") return get_only(req, [&] { return suggest(t.query); });
        if (s[0] == "vocabularies") {
            if (s.size() == 1) return get_only(req, [&] { return vocabularies(); });
            if (s.size() == 3 && s[2] == "relationships") return get_only(req, [&] { return relationships(s[1]); });
            if (s.size() == 5 && s[2] == "relationships" && s[4] == "attributing-concepts")
                return get_only(req, [&] { return attributing(s[1], s[3]); });
        }
        if (s.size() == 2 && s[0] == "remote" && s[1] == "concepts") return get_only(req, [&] { return remote(t.query); });
        throw ApiFailure{404, "not_found", "no route for " + req.target, {}};
    }

private:
    template <typename F>
    HttpResponse get_only(const HttpRequest& req, F&& f) {
        if (req.method != "GET") throw ApiFailure{405, "method_not_allowed", "use GET", {}};
        return f();
    }
    template <typename F>
    HttpResponse post_only(const HttpRequest& req, F&& f) {
        if (req.method != "POST") throw ApiFailure{405, "method_not_allowed", "use POST", {}};
        return f();
    }

    std::shared_ptr<const RepositoryState> snap() const { return service_.repository().snapshot(); }

    HttpResponse health() {
        auto st = snap();
        return ok({{"status", "ok"},
                   {"concepts", st->store().concept_count()},
                   {"relationships", st->store().relationship_count()},
                   {"vocabularies", st->store().vocabularies().size()},
                   {"collections", st->collections().size()},
                   {"annotations", st->index_entry_count()},
                   {"remote_enabled", options_.remote.enabled}});
    }

    HttpResponse import(const std::string& body) {
        IngestReport report;
        try {
            report = ingest_annotation_file(body, service_.repository());
        } catch (const IngestError& e) {
            throw ApiFailure{400, "invalid_annotation_file", e.what(), {}};
        }
        if (options_.persist_path && report.collections_touched > 0)
            write_snapshot(*options_.persist_path, service_.repository());
        return ok(codec::to_json(report));
    }

    HttpResponse list_collections() {
        auto st = snap();
        json out = json::array();
        for (const auto& [key, rec] : st->collections()) out.push_back(codec::summary_json(rec));
        return ok({{"collections", std::move(out)}});
    }

    HttpResponse collection_detail(const std::string& biobank, const std::string& name) {
        auto st = snap();
        const auto* rec = st->find({biobank, name});
        if (!rec) throw ApiFailure{404, "not_found", "no collection " + biobank + "/" + name, {}};
        return ok(codec::detail_json(*rec, *st));
    }

    HttpResponse search_concepts(const std::string& body) {
        auto j = parse_body(body);
        auto st = snap();
        auto seeds_it = j.find("seeds");
        if (seeds_it == j.end() || !seeds_it->is_array()) throw InvalidQuery("invalid_query", "seeds must be an array");
        std::vector<ConceptId> seeds;
        for (const auto& s : *seeds_it) seeds.push_back(require_concept(st->store(), codec::concept_key_from_json(s, "seed")));
        auto op = QueryOperator::Or;
        if (auto it = j.find("operator"); it != j.end() && !it->is_null()) {
            if (!it->is_string()) throw InvalidQuery("invalid_query", "operator must be a string");
            op = parse_operator(it->get<std::string>());
        }
        auto plan = compile(seeds, op, bool_field(j, "expansion", true), st->store());
        return ok(codec::to_json(search_by_concepts(plan, *st), st->store()));
    }

    HttpResponse search_relationship(const std::string& body) {
        auto j = parse_body(body);
        auto st = snap();
        auto attributing = j.find("attributing");
        if (attributing == j.end()) throw InvalidQuery("invalid_query", "attributing is required");
        RelationshipQuery q{string_field(j, "vocabulary"), string_field(j, "relationship"),
                            codec::concept_key_from_json(*attributing, "attributing")};
        return ok(codec::to_json(search_by_relationship(q, *st), st->store()));
    }

    HttpResponse search_collection_quality(const std::string& body) {
        auto j = parse_body(body);
        auto st = snap();
        return ok(codec::to_json(search_by_collection_quality(codec::quality_range_from_json(j), *st), st->store()));
    }

    HttpResponse search_attribute_quality(const std::string& body) {
        auto j = parse_body(body);
        auto st = snap();
        auto concept_it = j.find("concept");
        if (concept_it == j.end()) throw InvalidQuery("invalid_query", "concept is required");
        auto id = require_concept(st->store(), codec::concept_key_from_json(*concept_it, "concept"));
        auto range = codec::quality_range_from_json(j);
        return ok(codec::to_json(search_by_attribute_quality(id, range, bool_field(j, "expansion", false), *st),
                                 st->store()));
    }

    HttpResponse suggest(const std::map<std::string, std::string>& query) {
        std::size_t limit = 10;
        if (auto it = query.find("limit"); it != query.end()) {
            auto v = detail::parse_int(it->second);
            if (!v || *v < 1) throw InvalidQuery("invalid_query", "limit must be a positive integer");
            limit = static_cast<std::size_t>(*v);
        }
        auto q = query.count("q") ? query.at("q") : std::string{};
        auto st = snap();
        return ok(codec::to_json(suggest_concepts(q, limit, *st), st->store()));
    }

    HttpResponse vocabularies() {
        auto st = snap();
        json out = json::array();
        for (const auto& [id, count] : st->store().vocabularies()) out.push_back({{"id", id}, {"concepts", count}});
        return ok({{"vocabularies", std::move(out)}});
    }

    HttpResponse relationships(const std::string& vocabulary) {
        auto st = snap();
        return ok({{"vocabulary", vocabulary}, {"relationships", st->store().list_relationships(vocabulary)}});
    }

    HttpResponse attributing(const std::string& vocabulary, const std::string& relationship) {
        auto st = snap();
        json out = json::array();
        for (auto id : st->store().attributing_concepts(vocabulary, relationship))
            out.push_back(codec::to_json(st->store().at(id)));
        return ok({{"vocabulary", vocabulary}, {"relationship", relationship}, {"concepts", std::move(out)}});
    }

    HttpResponse remote(const std::map<std::string, std::string>& query) {
        auto q = query.count("q") ? query.at("q") : std::string{};
        if (q.empty() && options_.remote.enabled) throw InvalidQuery("empty_query", "q must not be empty");
        std::vector<Concept> found;
        try {
            found = remote_lookup(q, options_.remote);
        } catch (const RemoteError& e) {
            int status = e.code() == "remote_disabled" ? 503 : 502;
            throw ApiFailure{status, e.code(), e.what(), {}};
        }
        json out = json::array();
        for (const auto& c : found)
            out.push_back({{"id", to_int(c.id)}, {"code", c.key.code}, {"vocabulary", c.key.vocabulary}, {"name", c.name}});
        return ok({{"advisory", true}, {"candidates", std::move(out)}});
    }

    const Service& service_;
    const ServiceOptions& options_;
};

} // namespace

Service::Service(std::shared_ptr<Repository> repo, ServiceOptions options)
    : repo_(std::move(repo)), options_(std::move(options)) {}

HttpResponse Service::handle(const HttpRequest& request) const {
    try {
        Router r(*this, options_);
        return r.route(request);
    } catch (const ApiFailure& f) {
        return failure(f);
    } catch (const InvalidQuery& e) {
        return failure({400, e.code(), e.what(), {}});
    } catch (const std::exception& e) {
        return failure({500, "internal_error", e.what(), {}});
    }
}

std::shared_ptr<Service> make_service(const ServeConfig& config) {
    auto load = load_vocabulary_dir(config.vocabulary_dir);
    auto store = std::make_shared<const VocabularyStore>(std::move(load.store));
    std::shared_ptr<Repository> repo;
    if (config.snapshot && std::filesystem::exists(*config.snapshot)) {
        std::ifstream in(*config.snapshot, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        repo = std::make_shared<Repository>(import_snapshot(bytes, store));
    } else {
        repo = std::make_shared<Repository>(store);
    }
    ServiceOptions opts;
    opts.remote = config.remote;
    if (config.persist && config.snapshot) opts.persist_path = config.snapshot;
    return std::make_shared<Service>(std::move(repo), std::move(opts));
}

} // namespace colloc
