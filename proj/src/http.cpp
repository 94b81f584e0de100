// Socket server for Service and the remote concept lookup client. HTTPS
// support follows CPPHTTPLIB_OPENSSL_SUPPORT, set by the build.

#include <httplib.h>

#include "colloc/service.hpp"

#include <nlohmann/json.hpp>

namespace colloc {

struct HttpServer::Impl {
    std::shared_ptr<const Service> service;
    httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<const Service> service) : impl_(std::make_unique<Impl>()) {
    impl_->service = std::move(service);
    auto forward = [svc = impl_->service](const httplib::Request& req, httplib::Response& res) {
        auto out = svc->handle({req.method, req.target, req.body});
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    };
    impl_->server.Get(".*", forward);
    impl_->server.Post(".*", forward);
    impl_->server.Put(".*", forward);
    impl_->server.Delete(".*", forward);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

// ---------------------------------------------------------------------------

namespace {

struct ParsedUrl {
    std::string origin; // scheme://host[:port]
    std::string path;   // without trailing slash
};

ParsedUrl split_url(const std::string& url) {
    auto scheme = url.find("://");
    if (scheme == std::string::npos) throw RemoteError("remote_unavailable", "remote URL needs a scheme: " + url);
    auto slash = url.find('/', scheme + 3);
    ParsedUrl out{url.substr(0, slash), slash == std::string::npos ? std::string{} : url.substr(slash)};
    while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
    return out;
}

Concept candidate_from_json(const nlohmann::json& j) {
    Concept c;
    const auto& id = j.at("id");
    c.id = ConceptId{id.is_string() ? std::stoll(id.get<std::string>()) : id.get<std::int64_t>()};
    c.key.code = j.at("code").get<std::string>();
    c.key.vocabulary = j.at("vocabulary").get<std::string>();
    c.name = j.at("name").get<std::string>();
    if (auto d = j.find("domain"); d != j.end() && d->is_string()) c.domain = d->get<std::string>();
    if (auto s = j.find("standardConcept"); s != j.end() && s->is_string())
        c.standard = s->get<std::string>() == "Standard" || s->get<std::string>() == "S";
    return c;
}

} // namespace

std::vector<Concept> remote_lookup(const std::string& query, const RemoteConceptSource& source) {
    if (!source.enabled) throw RemoteError("remote_disabled", "remote concept lookup is disabled");

    auto url = split_url(source.base_url);
    httplib::Client client(url.origin);
    if (!client.is_valid()) throw RemoteError("remote_unavailable", "unsupported remote URL " + source.base_url);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(source.timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(source.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());

    httplib::Params params{{"query", query}};
    auto res = client.Get(url.path + "/concepts", params, httplib::Headers{});
    if (!res) throw RemoteError("remote_unavailable", "remote lookup failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw RemoteError("remote_unavailable", "remote lookup returned HTTP " + std::to_string(res->status));

    try {
        auto doc = nlohmann::json::parse(res->body);
        const auto& items = doc.is_array() ? doc : doc.at("content");
        if (!items.is_array()) throw RemoteError("remote_unavailable", "remote response has no concept array");
        std::vector<Concept> out;
        for (const auto& item : items) out.push_back(candidate_from_json(item));
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw RemoteError("remote_unavailable", std::string("cannot parse remote response: ") + e.what());
    } catch (const std::logic_error& e) {
        throw RemoteError("remote_unavailable", std::string("cannot parse remote response: ") + e.what());
    }
}

} // namespace colloc
