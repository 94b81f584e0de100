// colloc: command-line front end for the collection metadata repository.
//
//   colloc --vocab DIR load-vocab
//   colloc --vocab DIR --snapshot repo.json import annotations.csv
//   colloc --vocab DIR --snapshot repo.json search concepts LOINC:39156-5 [--op AND] [--no-expansion]
//   colloc --vocab DIR --snapshot repo.json search relationship --vocabulary LOINC
//          --relationship "Has scale" --attributing LOINC:LP-Nom
//   colloc --vocab DIR --snapshot repo.json search quality-collection --characteristic completeness --min 0.5
//   colloc --vocab DIR --snapshot repo.json search quality-attribute --concept LOINC:39156-5 --min 0.5
//   colloc --vocab DIR --snapshot repo.json serve --port 8080
//   colloc --vocab DIR --snapshot repo.json export [--out copy.json]
//   colloc --seed 42 gen-testdata --out DIR
//
// Exit status: 0 success, 1 runtime error, 2 usage error.

#include "colloc/ingest.hpp"
#include "colloc/json_codec.hpp"
#include "colloc/scenario.hpp"
#include "colloc/search.hpp"
#include "colloc/service.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace colloc;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string vocab;
    std::string snapshot;
    bool json = false;
    std::uint64_t seed = 42;
};

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot read " + p.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    auto tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, p);
}

void print_diagnostics(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) std::cerr << "line " << d.line << ": " << to_string(d.severity) << ": " << d.message << "\n";
}

std::shared_ptr<const VocabularyStore> load_store(const Globals& g, bool verbose = false) {
    if (g.vocab.empty()) throw UsageError("--vocab DIR is required");
    auto load = load_vocabulary_dir(g.vocab);
    if (verbose) print_diagnostics(load.diagnostics);
    return std::make_shared<const VocabularyStore>(std::move(load.store));
}

RepositoryState load_repository(const Globals& g, std::shared_ptr<const VocabularyStore> store) {
    if (g.snapshot.empty() || !std::filesystem::exists(g.snapshot))
        throw Error("no repository: pass --snapshot FILE of an existing repository (run import first)");
    return import_snapshot(read_file(g.snapshot), std::move(store));
}

ConceptKey parse_key(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
        throw UsageError("concept must be written VOCABULARY:CODE, got '" + text + "'");
    return {text.substr(colon + 1), text.substr(0, colon)};
}

ConceptId require(const VocabularyStore& store, const ConceptKey& key) {
    const auto* c = store.find(key);
    if (!c) throw Error("concept " + to_string(key) + " not found in vocabulary");
    return c->id;
}

QualityCharacteristic parse_char(const std::string& text) {
    auto c = parse_characteristic(text);
    if (!c) throw UsageError("unknown quality characteristic '" + text + "'");
    return *c;
}

void print_hits(const SearchResult& result, const VocabularyStore& store) {
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << std::left << std::setw(12) << "BIOBANK" << std::setw(14) << "COLLECTION" << "MATCHES\n";
    for (const auto& h : result.hits) {
        std::string matches;
        for (const auto& a : h.matched_attributes) {
            if (!matches.empty()) matches += "; ";
            matches += a.attribute + " [";
            bool first = true;
            for (auto c : a.concepts) {
                matches += (first ? "" : ", ") + store.at(c).key.vocabulary + ":" + store.at(c).key.code;
                first = false;
            }
            matches += "]";
        }
        if (h.highlight) {
            std::ostringstream hl;
            hl << (matches.empty() ? "" : "  ") << "*" << to_string(h.highlight->value.characteristic);
            if (h.highlight->scope == QualityScope::attribute) hl << "(" << h.highlight->attribute << ")";
            hl << "=" << h.highlight->value.value;
            matches += hl.str();
        }
        std::cout << std::setw(12) << h.key.biobank << std::setw(14) << h.key.name << matches << "\n";
    }
    std::cout << result.hits.size() << " collection(s)\n";
}

void emit(const Globals& g, const SearchResult& result, const VocabularyStore& store) {
    if (g.json) std::cout << codec::to_json(result, store).dump() << "\n";
    else print_hits(result, store);
}

std::function<void()> serve_stop;

void on_signal(int) {
    if (serve_stop) serve_stop();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biobank collection metadata repository and search"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--vocab", g.vocab, "Directory with CONCEPT.csv and CONCEPT_RELATIONSHIP.csv")->envname("COLLOC_VOCAB");
    app.add_option("--snapshot", g.snapshot, "Repository snapshot JSON")->envname("COLLOC_SNAPSHOT");
    app.add_flag("--json", g.json, "Machine-readable JSON output");
    app.add_option("--seed", g.seed, "Random seed for gen-testdata");

    auto* load_cmd = app.add_subcommand("load-vocab", "Load and check the vocabulary tables");

    auto* import_cmd = app.add_subcommand("import", "Import an annotation CSV into the snapshot");
    std::string import_file;
    import_cmd->add_option("file", import_file, "Annotation CSV")->required();

    auto* search_cmd = app.add_subcommand("search", "Search collections");
    search_cmd->require_subcommand(1);

    auto* s_concepts = search_cmd->add_subcommand("concepts", "Search by concepts");
    std::vector<std::string> seeds;
    std::string op = "OR";
    bool no_expansion = false;
    s_concepts->add_option("concepts", seeds, "Seed concepts as VOCABULARY:CODE")->required();
    s_concepts->add_option("--op", op, "AND or OR")->check(CLI::IsMember({"AND", "OR", "and", "or"}));
    s_concepts->add_flag("--no-expansion", no_expansion, "Match seeds exactly");

    auto* s_rel = search_cmd->add_subcommand("relationship", "Search by attributing relationship");
    std::string rel_vocab, rel_name, rel_target;
    s_rel->add_option("--vocabulary", rel_vocab)->required();
    s_rel->add_option("--relationship", rel_name)->required();
    s_rel->add_option("--attributing", rel_target, "VOCABULARY:CODE")->required();

    std::string characteristic = "completeness";
    double qmin = 0.0, qmax = 1.0;
    auto* s_qc = search_cmd->add_subcommand("quality-collection", "Search by collection quality");
    s_qc->add_option("--characteristic", characteristic);
    s_qc->add_option("--min", qmin);
    s_qc->add_option("--max", qmax);

    auto* s_qa = search_cmd->add_subcommand("quality-attribute", "Search by attribute quality");
    std::string qa_concept;
    bool qa_expansion = false;
    s_qa->add_option("--concept", qa_concept, "VOCABULARY:CODE")->required();
    s_qa->add_option("--characteristic", characteristic);
    s_qa->add_option("--min", qmin);
    s_qa->add_option("--max", qmax);
    s_qa->add_flag("--expansion", qa_expansion, "Also match the concept's complemented list");

    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
    ServeConfig serve;
    std::string remote_url;
    bool remote_enabled = false;
    serve_cmd->add_option("--host", serve.host)->envname("COLLOC_HOST");
    serve_cmd->add_option("--port", serve.port)->envname("COLLOC_PORT");
    serve_cmd->add_option("--remote-url", remote_url, "Athena-style concept API base URL")->envname("COLLOC_REMOTE_URL");
    serve_cmd->add_flag("--remote-enabled", remote_enabled, "Enable remote concept lookup")->envname("COLLOC_REMOTE_ENABLED");
    serve_cmd->add_flag("--persist", serve.persist, "Write the snapshot after every import");

    auto* export_cmd = app.add_subcommand("export", "Write the repository snapshot");
    std::string export_out;
    export_cmd->add_option("--out", export_out, "Output file (default stdout)");

    auto* gen_cmd = app.add_subcommand("gen-testdata", "Generate the synthetic validation scenario");
    ScenarioSpec spec;
    std::string gen_out;
    gen_cmd->add_option("--out", gen_out, "Output directory")->required();
    gen_cmd->add_option("--collections", spec.collections);
    gen_cmd->add_option("--attributes", spec.attributes_per_collection);
    gen_cmd->add_option("--concepts", spec.concepts);
    gen_cmd->add_option("--vocabularies", spec.vocabularies);
    gen_cmd->add_option("--annotations", spec.annotations);
    gen_cmd->add_option("--patients", spec.patients);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*load_cmd) {
            if (g.vocab.empty()) throw UsageError("--vocab DIR is required");
            auto load = load_vocabulary_dir(g.vocab);
            print_diagnostics(load.diagnostics);
            if (g.json) {
                codec::json out = {{"concepts", load.store.concept_count()},
                                   {"relationships", load.store.relationship_count()},
                                   {"vocabularies", load.store.vocabularies()},
                                   {"diagnostics", load.diagnostics.size()}};
                std::cout << out.dump() << "\n";
            } else {
                std::cout << load.store.concept_count() << " concepts, " << load.store.relationship_count()
                          << " relationships\n";
                for (const auto& [v, n] : load.store.vocabularies()) std::cout << "  " << v << ": " << n << "\n";
            }
            return 0;
        }

        if (*import_cmd) {
            if (g.snapshot.empty()) throw UsageError("--snapshot FILE is required for import");
            auto store = load_store(g);
            Repository repo(std::filesystem::exists(g.snapshot) ? import_snapshot(read_file(g.snapshot), store)
                                                                : RepositoryState(store));
            auto report = ingest_annotation_file(read_file(import_file), repo);
            write_file(g.snapshot, export_snapshot(*repo.snapshot()));
            if (g.json) {
                std::cout << codec::to_json(report).dump() << "\n";
            } else {
                print_diagnostics(report.diagnostics);
                auto snap = repo.snapshot();
                std::cout << report.accepted_rows << " rows accepted, " << report.collections_touched
                          << " collection(s) imported; repository holds " << snap->collections().size()
                          << " collection(s), " << snap->index_entry_count() << " annotation(s)\n";
            }
            bool errors = std::any_of(report.diagnostics.begin(), report.diagnostics.end(),
                                      [](const Diagnostic& d) { return d.severity == Severity::error; });
            return errors ? 1 : 0;
        }

        if (*search_cmd) {
            for (const auto& s : seeds) parse_key(s);
            if (*s_rel) parse_key(rel_target);
            if (*s_qa) parse_key(qa_concept);
            auto store = load_store(g);
            auto state = load_repository(g, store);
            if (*s_concepts) {
                std::vector<ConceptId> ids;
                for (const auto& s : seeds) ids.push_back(require(*store, parse_key(s)));
                auto plan = compile(ids, parse_operator(op), !no_expansion, *store);
                emit(g, search_by_concepts(plan, state), *store);
            } else if (*s_rel) {
                emit(g, search_by_relationship({rel_vocab, rel_name, parse_key(rel_target)}, state), *store);
            } else if (*s_qc) {
                emit(g, search_by_collection_quality({parse_char(characteristic), qmin, qmax}, state), *store);
            } else if (*s_qa) {
                auto id = require(*store, parse_key(qa_concept));
                emit(g, search_by_attribute_quality(id, {parse_char(characteristic), qmin, qmax}, qa_expansion, state),
                     *store);
            }
            return 0;
        }

        if (*serve_cmd) {
            if (g.vocab.empty()) throw UsageError("--vocab DIR is required");
            serve.vocabulary_dir = g.vocab;
            if (!g.snapshot.empty()) serve.snapshot = g.snapshot;
            serve.remote.base_url = remote_url;
            serve.remote.enabled = remote_enabled;
            if (serve.remote.enabled && remote_url.empty()) throw UsageError("--remote-enabled needs --remote-url");
            auto service = make_service(serve);
            HttpServer server(service);
            int port = server.bind(serve.host, serve.port);
            serve_stop = [&server] { server.stop(); };
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on http://" << serve.host << ":" << port << "/api/v1\n";
            server.listen();
            return 0;
        }

        if (*export_cmd) {
            auto store = load_store(g);
            auto bytes = export_snapshot(load_repository(g, store));
            if (export_out.empty()) std::cout << bytes;
            else write_file(export_out, bytes);
            return 0;
        }

        if (*gen_cmd) {
            spec.seed = g.seed;
            auto problems = validate(spec);
            if (!problems.empty()) {
                for (const auto& p : problems) std::cerr << "error: " << p << "\n";
                return 2;
            }
            write_scenario(generate_scenario(spec), gen_out);
            if (!g.json) std::cout << "wrote scenario to " << gen_out << "\n";
            else std::cout << codec::json{{"out", gen_out}, {"seed", g.seed}}.dump() << "\n";
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidQuery& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
