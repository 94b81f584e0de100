#pragma once
// HTTP JSON facade over ingest, vocabulary browsing and search.
//
// Service::handle is transport-free (method + raw target + body in, status +
// JSON body out) so it can be exercised in-process; HttpServer binds it to a
// socket. All endpoints live under /api/v1:
//
//   POST /collections/import                       CSV body -> IngestReport
//   GET  /collections
//   GET  /collections/{biobank}/{name}
//   POST /search/concepts                          {seeds, operator, expansion}
//   POST /search/relationship                      {vocabulary, relationship, attributing}
//   POST /search/quality/collection                {characteristic, min, max}
//   POST /search/quality/attribute                 {concept, characteristic, min, max, expansion}
//   GET  /concepts/suggest?q=&limit=
//   GET  /vocabularies
//   GET  /vocabularies/{v}/relationships
//   GET  /vocabularies/{v}/relationships/{r}/attributing-concepts
//   GET  /remote/concepts?q=
//   GET  /health                                   (also served at /health)
//
// Non-2xx bodies are always {"status", "code", "message"[, "details"]}.

#include "colloc/repository.hpp"
#include "colloc/vocabulary.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace colloc {

// Athena-style concept lookup. Disabled by default; while disabled nothing
// in the process opens a network connection.
struct RemoteConceptSource {
    std::string base_url;
    std::chrono::milliseconds timeout{5000};
    bool enabled = false;
};

class RemoteError : public Error {
public:
    RemoteError(std::string code, const std::string& message) : Error(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// GET {base_url}/concepts?query=<q>. Accepts either a JSON array of concepts
// or an object whose "content" array holds them; each entry needs id, code,
// name and vocabulary. Results are advisory and never stored.
// Throws RemoteError("remote_disabled" | "remote_unavailable").
std::vector<Concept> remote_lookup(const std::string& query, const RemoteConceptSource& source);

struct HttpRequest {
    std::string method;
    std::string target; // path plus optional ?query, percent-encoded
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

struct ServiceOptions {
    RemoteConceptSource remote;
    // When set, the repository is written here after every successful import.
    std::optional<std::filesystem::path> persist_path;
};

class Service {
public:
    Service(std::shared_ptr<Repository> repo, ServiceOptions options = {});

    HttpResponse handle(const HttpRequest& request) const;

    Repository& repository() const { return *repo_; }

private:
    std::shared_ptr<Repository> repo_;
    ServiceOptions options_;
};

struct ServeConfig {
    std::filesystem::path vocabulary_dir;
    std::optional<std::filesystem::path> snapshot;
    std::string host = "127.0.0.1";
    int port = 8080;
    RemoteConceptSource remote;
    bool persist = false;
};

// Loads vocabulary and optional snapshot; throws on any load error.
std::shared_ptr<Service> make_service(const ServeConfig& config);

class HttpServer {
public:
    explicit HttpServer(std::shared_ptr<const Service> service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Binds (port 0 picks a free port) and returns the bound port. Throws
    // Error when the address cannot be bound.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace colloc
