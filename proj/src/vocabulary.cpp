#include "colloc/vocabulary.hpp"

#include "text_util.hpp"

#include <fstream>
#include <istream>
#include <sstream>

namespace colloc {

const char* to_string(Severity s) { return s == Severity::warning ? "warning" : "error"; }

std::string to_string(const ConceptKey& key) { return key.code + " (" + key.vocabulary + ")"; }

VocabularyStore VocabularyStore::build(std::vector<Concept> concepts,
                                       std::vector<ConceptRelationship> relationships) {
    VocabularyStore s;
    s.concepts_ = std::move(concepts);
    s.children_.resize(s.concepts_.size());
    s.equivalents_.resize(s.concepts_.size());
    for (std::size_t i = 0; i < s.concepts_.size(); ++i) {
        const auto& c = s.concepts_[i];
        if (!s.by_id_.emplace(to_int(c.id), i).second)
            throw VocabularyError("duplicate concept_id " + std::to_string(to_int(c.id)));
        if (!s.by_key_.emplace(c.key, i).second)
            throw VocabularyError("duplicate concept key " + to_string(c.key));
    }

    std::sort(relationships.begin(), relationships.end());
    relationships.erase(std::unique(relationships.begin(), relationships.end()), relationships.end());
    s.edges_ = std::move(relationships);

    for (const auto& e : s.edges_) {
        auto src = s.index_of(e.source);
        auto dst = s.index_of(e.target);
        if (e.relationship == kIsA) {
            if (src == dst)
                throw VocabularyError("\"Is a\" cycle through concept " + std::to_string(to_int(e.source)));
            s.children_[dst].push_back(e.source);
        } else if (e.relationship == kMapsTo) {
            if (src == dst) continue;
            s.equivalents_[src].insert(e.target);
            s.equivalents_[dst].insert(e.source);
        } else {
            const auto& vocab = s.concepts_[src].key.vocabulary;
            s.attributing_[vocab][e.relationship][e.target].insert(e.source);
        }
    }

    // Kahn's algorithm over child -> parent edges; anything left unvisited
    // sits on (or behind) a cycle.
    std::vector<std::size_t> pending(s.concepts_.size(), 0);
    for (std::size_t i = 0; i < s.children_.size(); ++i) pending[i] = s.children_[i].size();
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < pending.size(); ++i)
        if (pending[i] == 0) ready.push_back(i);
    std::vector<std::vector<std::size_t>> parents(s.concepts_.size());
    for (std::size_t p = 0; p < s.children_.size(); ++p)
        for (auto child : s.children_[p]) parents[s.index_of(child)].push_back(p);
    std::size_t visited = 0;
    while (!ready.empty()) {
        auto n = ready.back();
        ready.pop_back();
        ++visited;
        for (auto p : parents[n])
            if (--pending[p] == 0) ready.push_back(p);
    }
    if (visited != s.concepts_.size()) {
        // Walk down from a blocked node through blocked children until a
        // node repeats; that node is on a cycle.
        std::size_t n = 0;
        while (pending[n] == 0) ++n;
        std::vector<bool> seen(s.concepts_.size(), false);
        while (!seen[n]) {
            seen[n] = true;
            for (auto child : s.children_[n]) {
                auto ci = s.index_of(child);
                if (pending[ci] != 0) {
                    n = ci;
                    break;
                }
            }
        }
        throw VocabularyError("\"Is a\" cycle through concept " + std::to_string(to_int(s.concepts_[n].id)));
    }
    return s;
}

std::size_t VocabularyStore::index_of(ConceptId id) const {
    auto it = by_id_.find(to_int(id));
    if (it == by_id_.end()) throw VocabularyError("unknown concept_id " + std::to_string(to_int(id)));
    return it->second;
}

const Concept* VocabularyStore::find(ConceptId id) const {
    auto it = by_id_.find(to_int(id));
    return it == by_id_.end() ? nullptr : &concepts_[it->second];
}

const Concept& VocabularyStore::at(ConceptId id) const { return concepts_[index_of(id)]; }

const Concept* VocabularyStore::find(const ConceptKey& key) const {
    auto it = by_key_.find(key);
    return it == by_key_.end() ? nullptr : &concepts_[it->second];
}

std::optional<Concept> VocabularyStore::resolve(const ConceptKey& key) const {
    if (const auto* c = find(key)) return *c;
    return std::nullopt;
}

ConceptSet VocabularyStore::descendants(ConceptId c) const {
    ConceptSet out;
    std::vector<ConceptId> stack(children_[index_of(c)]);
    while (!stack.empty()) {
        auto n = stack.back();
        stack.pop_back();
        if (!out.insert(n).second) continue;
        const auto& kids = children_[index_of(n)];
        stack.insert(stack.end(), kids.begin(), kids.end());
    }
    return out;
}

ConceptSet VocabularyStore::equivalents(ConceptId c) const { return equivalents_[index_of(c)]; }

const std::vector<ConceptId>& VocabularyStore::children(ConceptId c) const { return children_[index_of(c)]; }

std::map<std::string, std::size_t> VocabularyStore::vocabularies() const {
    std::map<std::string, std::size_t> out;
    for (const auto& c : concepts_) ++out[c.key.vocabulary];
    return out;
}

std::set<std::string> VocabularyStore::list_relationships(const std::string& vocabulary) const {
    std::set<std::string> out;
    auto it = attributing_.find(vocabulary);
    if (it == attributing_.end()) return out;
    for (const auto& [rel, targets] : it->second) out.insert(rel);
    return out;
}

ConceptSet VocabularyStore::attributing_concepts(const std::string& vocabulary,
                                                 const std::string& relationship) const {
    ConceptSet out;
    auto v = attributing_.find(vocabulary);
    if (v == attributing_.end()) return out;
    auto r = v->second.find(relationship);
    if (r == v->second.end()) return out;
    for (const auto& [target, sources] : r->second) out.insert(target);
    return out;
}

ConceptSet VocabularyStore::concepts_with_property(const std::string& vocabulary,
                                                   const std::string& relationship,
                                                   ConceptId attributing) const {
    auto v = attributing_.find(vocabulary);
    if (v == attributing_.end()) return {};
    auto r = v->second.find(relationship);
    if (r == v->second.end()) return {};
    auto t = r->second.find(attributing);
    if (t == r->second.end()) return {};
    return t->second;
}

// ---------------------------------------------------------------------------
// Table loading

namespace {

class TsvTable {
public:
    TsvTable(std::istream& in, const char* table_name, std::vector<std::string> required)
        : in_(in), name_(table_name) {
        std::string header;
        if (!std::getline(in_, header)) throw VocabularyError(name_ + ": missing header row");
        detail::strip_cr(header);
        if (header.rfind("\xEF\xBB\xBF", 0) == 0) header.erase(0, 3);
        auto cols = detail::split(header, '\t');
        for (const auto& r : required) {
            auto it = std::find_if(cols.begin(), cols.end(),
                                   [&](const std::string& c) { return detail::lower(detail::trim(c)) == r; });
            if (it == cols.end()) throw VocabularyError(name_ + ": missing column " + r);
            index_.push_back(static_cast<std::size_t>(it - cols.begin()));
        }
    }

    // Returns false at end of input. Blank lines are skipped.
    bool next(std::vector<std::string>& fields, std::size_t& line_no) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_;
            detail::strip_cr(line);
            if (line.empty()) continue;
            auto all = detail::split(line, '\t');
            fields.clear();
            for (auto i : index_) fields.push_back(i < all.size() ? all[i] : std::string{});
            short_row_ = std::any_of(index_.begin(), index_.end(), [&](auto i) { return i >= all.size(); });
            line_no = line_;
            return true;
        }
        return false;
    }

    bool short_row() const { return short_row_; }
    const std::string& name() const { return name_; }

private:
    std::istream& in_;
    std::string name_;
    std::vector<std::size_t> index_;
    std::size_t line_ = 1;
    bool short_row_ = false;
};

} // namespace

VocabularyLoad load_vocabulary(std::istream& concept_table, std::istream& relationship_table) {
    VocabularyLoad result;
    auto diag = [&](const std::string& table, std::size_t line, std::string msg) {
        result.diagnostics.push_back({line, Severity::error, table + ": " + std::move(msg)});
    };

    std::vector<Concept> concepts;
    std::set<std::int64_t> ids;
    std::set<ConceptKey> keys;
    {
        TsvTable t(concept_table, "CONCEPT",
                   {"concept_id", "concept_code", "concept_name", "vocabulary_id", "domain_id", "standard_concept"});
        std::vector<std::string> f;
        std::size_t line = 0;
        while (t.next(f, line)) {
            if (t.short_row()) {
                diag(t.name(), line, "row has too few columns; skipped");
                continue;
            }
            auto id = detail::parse_int(f[0]);
            if (!id) {
                diag(t.name(), line, "concept_id '" + f[0] + "' is not an integer; skipped");
                continue;
            }
            Concept c;
            c.id = ConceptId{*id};
            c.key = {std::string(detail::trim(f[1])), std::string(detail::trim(f[3]))};
            c.name = std::string(detail::trim(f[2]));
            c.domain = std::string(detail::trim(f[4]));
            c.standard = detail::trim(f[5]) == "S";
            if (c.key.code.empty() || c.key.vocabulary.empty()) {
                diag(t.name(), line, "empty concept_code or vocabulary_id; skipped");
                continue;
            }
            if (c.name.empty()) {
                diag(t.name(), line, "empty concept_name; skipped");
                continue;
            }
            if (!ids.insert(*id).second)
                throw VocabularyError("CONCEPT line " + std::to_string(line) + ": duplicate concept_id " +
                                      std::to_string(*id));
            if (!keys.insert(c.key).second) {
                ids.erase(*id);
                diag(t.name(), line, "duplicate concept key " + to_string(c.key) + "; skipped");
                continue;
            }
            concepts.push_back(std::move(c));
        }
    }

    std::vector<ConceptRelationship> edges;
    {
        TsvTable t(relationship_table, "CONCEPT_RELATIONSHIP", {"concept_id_1", "relationship_id", "concept_id_2"});
        std::vector<std::string> f;
        std::size_t line = 0;
        while (t.next(f, line)) {
            if (t.short_row()) {
                diag(t.name(), line, "row has too few columns; skipped");
                continue;
            }
            auto a = detail::parse_int(f[0]);
            auto b = detail::parse_int(f[2]);
            std::string rel(detail::trim(f[1]));
            if (!a || !b || rel.empty()) {
                diag(t.name(), line, "malformed relationship row; skipped");
                continue;
            }
            if (!ids.count(*a) || !ids.count(*b)) {
                diag(t.name(), line,
                     "dangling endpoint " + std::to_string(ids.count(*a) ? *b : *a) + "; edge skipped");
                continue;
            }
            edges.push_back({ConceptId{*a}, std::move(rel), ConceptId{*b}});
        }
    }

    result.store = VocabularyStore::build(std::move(concepts), std::move(edges));
    return result;
}

VocabularyLoad load_vocabulary(const std::filesystem::path& concept_file,
                               const std::filesystem::path& relationship_file) {
    std::ifstream c(concept_file, std::ios::binary);
    if (!c) throw VocabularyError("cannot open " + concept_file.string());
    std::ifstream r(relationship_file, std::ios::binary);
    if (!r) throw VocabularyError("cannot open " + relationship_file.string());
    return load_vocabulary(c, r);
}

VocabularyLoad load_vocabulary_dir(const std::filesystem::path& dir) {
    return load_vocabulary(dir / kConceptFile, dir / kRelationshipFile);
}

} // namespace colloc
