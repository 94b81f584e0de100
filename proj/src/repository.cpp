#include "colloc/repository.hpp"

#include <algorithm>
#include <cmath>

namespace colloc {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::string out = "record rejected";
    for (const auto& p : problems) out += "; " + p;
    return out;
}

void check_quality(const QualityMap& q, const std::string& where, std::vector<std::string>& problems) {
    for (const auto& [c, v] : q)
        if (!std::isfinite(v) || !is_fraction(v))
            problems.push_back(where + ": " + to_string(c) + " value " + std::to_string(v) + " outside [0,1]");
}

} // namespace

RecordRejected::RecordRejected(std::vector<std::string> problems)
    : Error(join_problems(problems)), problems_(std::move(problems)) {}

std::string to_string(const CollectionKey& key) { return key.biobank + "/" + key.name; }

const AttributeRecord* CollectionRecord::attribute(std::string_view attribute_name) const {
    for (const auto& a : attributes)
        if (a.name == attribute_name) return &a;
    return nullptr;
}

std::vector<std::string> validate(const CollectionRecord& rec) {
    std::vector<std::string> problems;
    if (rec.biobank.empty()) problems.push_back("biobank is empty");
    if (rec.name.empty()) problems.push_back("collection name is empty");
    check_quality(rec.quality, "collection " + rec.name, problems);
    std::set<std::string> names;
    for (const auto& a : rec.attributes) {
        if (a.name.empty()) problems.push_back("attribute name is empty");
        else if (!names.insert(a.name).second) problems.push_back("duplicate attribute '" + a.name + "'");
        check_quality(a.quality, "attribute " + a.name, problems);
        for (const auto& k : a.concepts)
            if (k.code.empty() || k.vocabulary.empty())
                problems.push_back("attribute " + a.name + ": concept key with empty code or vocabulary");
    }
    return problems;
}

RepositoryState::RepositoryState(std::shared_ptr<const VocabularyStore> store) : store_(std::move(store)) {
    if (!store_) store_ = std::make_shared<const VocabularyStore>();
}

UpsertOutcome RepositoryState::upsert_collection(CollectionRecord rec) {
    auto problems = validate(rec);
    if (!problems.empty()) throw RecordRejected(std::move(problems));

    auto key = rec.key();
    auto it = collections_.find(key);
    if (it == collections_.end()) {
        index_record(rec);
        collections_.emplace(std::move(key), std::move(rec));
        return UpsertOutcome::created;
    }
    unindex_record(it->second);
    index_record(rec);
    it->second = std::move(rec);
    return UpsertOutcome::replaced;
}

void RepositoryState::index_record(const CollectionRecord& rec) {
    for (const auto& a : rec.attributes)
        for (const auto& k : a.concepts)
            if (const auto* c = store_->find(k)) index_[c->id].insert({rec.key(), a.name});
}

void RepositoryState::unindex_record(const CollectionRecord& rec) {
    for (const auto& a : rec.attributes)
        for (const auto& k : a.concepts)
            if (const auto* c = store_->find(k)) {
                auto it = index_.find(c->id);
                if (it == index_.end()) continue;
                it->second.erase({rec.key(), a.name});
                if (it->second.empty()) index_.erase(it);
            }
}

const CollectionRecord* RepositoryState::find(const CollectionKey& key) const {
    auto it = collections_.find(key);
    return it == collections_.end() ? nullptr : &it->second;
}

std::size_t RepositoryState::index_entry_count() const {
    std::size_t n = 0;
    for (const auto& [c, refs] : index_) n += refs.size();
    return n;
}

std::vector<UnresolvedAnnotation> RepositoryState::unresolved(const CollectionKey& key) const {
    std::vector<UnresolvedAnnotation> out;
    const auto* rec = find(key);
    if (!rec) return out;
    for (const auto& a : rec->attributes)
        for (const auto& k : a.concepts)
            if (!store_->find(k)) out.push_back({a.name, k});
    return out;
}

std::vector<ConceptMatch> RepositoryState::collections_for_concepts(const ConceptSet& concepts) const {
    // collection -> attribute -> matched concepts
    std::map<CollectionKey, std::map<std::string, ConceptSet>> evidence;
    for (auto c : concepts) {
        auto it = index_.find(c);
        if (it == index_.end()) continue;
        for (const auto& ref : it->second) evidence[ref.collection][ref.attribute].insert(c);
    }
    std::vector<ConceptMatch> out;
    out.reserve(evidence.size());
    for (auto& [key, attrs] : evidence) {
        const auto& rec = collections_.at(key);
        ConceptMatch m{&rec, {}};
        for (const auto& a : rec.attributes) {
            auto hit = attrs.find(a.name);
            if (hit != attrs.end()) m.attributes.push_back({a.name, std::move(hit->second)});
        }
        out.push_back(std::move(m));
    }
    return out;
}

ConceptIndex RepositoryState::rebuild_index() const {
    ConceptIndex idx;
    for (const auto& [key, rec] : collections_)
        for (const auto& a : rec.attributes)
            for (const auto& k : a.concepts)
                if (const auto* c = store_->find(k)) idx[c->id].insert({key, a.name});
    return idx;
}

bool RepositoryState::operator==(const RepositoryState& other) const {
    return collections_ == other.collections_ && index_ == other.index_;
}

// ---------------------------------------------------------------------------

Repository::Repository(std::shared_ptr<const VocabularyStore> store)
    : current_(std::make_shared<const RepositoryState>(std::move(store))) {}

Repository::Repository(RepositoryState initial)
    : current_(std::make_shared<const RepositoryState>(std::move(initial))) {}

std::shared_ptr<const RepositoryState> Repository::snapshot() const {
    std::lock_guard lock(read_mutex_);
    return current_;
}

UpsertOutcome Repository::upsert_collection(CollectionRecord rec) {
    std::lock_guard writer(write_mutex_);
    auto next = std::make_shared<RepositoryState>(*snapshot());
    auto outcome = next->upsert_collection(std::move(rec));
    std::lock_guard lock(read_mutex_);
    current_ = std::move(next);
    return outcome;
}

std::vector<CommitOutcome> Repository::commit(std::vector<CollectionRecord> records) {
    std::lock_guard writer(write_mutex_);
    auto next = std::make_shared<RepositoryState>(*snapshot());
    std::vector<CommitOutcome> outcomes;
    outcomes.reserve(records.size());
    for (auto& rec : records) {
        CommitOutcome o;
        o.key = rec.key();
        try {
            o.outcome = next->upsert_collection(std::move(rec));
            o.committed = true;
        } catch (const RecordRejected& e) {
            o.problems = e.problems();
        }
        outcomes.push_back(std::move(o));
    }
    std::lock_guard lock(read_mutex_);
    current_ = std::move(next);
    return outcomes;
}

void Repository::replace(RepositoryState state) {
    std::lock_guard writer(write_mutex_);
    auto next = std::make_shared<const RepositoryState>(std::move(state));
    std::lock_guard lock(read_mutex_);
    current_ = std::move(next);
}

} // namespace colloc
