#pragma once
// Integrated collection metadata from all biobanks plus the inverted
// concept -> (collection, attribute) index used by concept searches.
//
// RepositoryState is a plain value. Repository wraps it for concurrent use:
// readers grab an immutable snapshot, writers build a modified copy and
// publish it atomically.

#include "colloc/error.hpp"
#include "colloc/quality.hpp"
#include "colloc/vocabulary.hpp"

#include <compare>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace colloc {

struct CollectionKey {
    std::string biobank;
    std::string name;

    auto operator<=>(const CollectionKey&) const = default;
    bool operator==(const CollectionKey&) const = default;
};

std::string to_string(const CollectionKey& key);

struct AttributeRecord {
    std::string name;
    std::set<ConceptKey> concepts;
    QualityMap quality;

    bool operator==(const AttributeRecord&) const = default;
};

struct CollectionRecord {
    std::string biobank;
    std::string name;
    std::string description;
    std::vector<AttributeRecord> attributes;
    QualityMap quality;

    CollectionKey key() const { return {biobank, name}; }
    const AttributeRecord* attribute(std::string_view attribute_name) const;

    bool operator==(const CollectionRecord&) const = default;
};

// Empty when the record satisfies all invariants.
std::vector<std::string> validate(const CollectionRecord& rec);

struct AttributeRef {
    CollectionKey collection;
    std::string attribute;

    auto operator<=>(const AttributeRef&) const = default;
    bool operator==(const AttributeRef&) const = default;
};

using ConceptIndex = std::map<ConceptId, std::set<AttributeRef>>;

enum class UpsertOutcome { created, replaced };

struct AttributeMatch {
    std::string attribute;
    ConceptSet concepts;

    bool operator==(const AttributeMatch&) const = default;
};

struct ConceptMatch {
    const CollectionRecord* collection = nullptr;
    std::vector<AttributeMatch> attributes; // in the record's attribute order
};

struct UnresolvedAnnotation {
    std::string attribute;
    ConceptKey key;

    bool operator==(const UnresolvedAnnotation&) const = default;
};

class RepositoryState {
public:
    explicit RepositoryState(std::shared_ptr<const VocabularyStore> store);

    // Throws RecordRejected (state unchanged) when `rec` is invalid.
    UpsertOutcome upsert_collection(CollectionRecord rec);

    const std::map<CollectionKey, CollectionRecord>& collections() const { return collections_; }
    const CollectionRecord* find(const CollectionKey& key) const;
    const ConceptIndex& concept_index() const { return index_; }
    std::size_t index_entry_count() const;

    // Annotations whose concept key does not resolve in the vocabulary; kept
    // on the record but excluded from the index.
    std::vector<UnresolvedAnnotation> unresolved(const CollectionKey& key) const;

    // Every collection with >= 1 attribute annotated by a concept in `concepts`,
    // sorted by key.
    std::vector<ConceptMatch> collections_for_concepts(const ConceptSet& concepts) const;

    // Index recomputed from the records alone.
    ConceptIndex rebuild_index() const;

    const VocabularyStore& store() const { return *store_; }
    const std::shared_ptr<const VocabularyStore>& store_ptr() const { return store_; }

    // Deep equality over records and index; the vocabulary is not compared.
    bool operator==(const RepositoryState& other) const;

private:
    void index_record(const CollectionRecord& rec);
    void unindex_record(const CollectionRecord& rec);

    std::shared_ptr<const VocabularyStore> store_;
    std::map<CollectionKey, CollectionRecord> collections_;
    ConceptIndex index_;
};

// JSON snapshot; see README for the document layout.
std::string export_snapshot(const RepositoryState& state);
// Throws SnapshotError with a position (byte offset or JSON path) on bad input.
RepositoryState import_snapshot(std::string_view bytes, std::shared_ptr<const VocabularyStore> store);

// Outcome of committing one record inside a batch.
struct CommitOutcome {
    CollectionKey key;
    bool committed = false;
    UpsertOutcome outcome = UpsertOutcome::created;
    std::vector<std::string> problems;
};

// Single-writer, multi-reader holder of the current RepositoryState.
class Repository {
public:
    explicit Repository(std::shared_ptr<const VocabularyStore> store);
    explicit Repository(RepositoryState initial);

    std::shared_ptr<const RepositoryState> snapshot() const;

    UpsertOutcome upsert_collection(CollectionRecord rec);
    // Each record is applied or skipped on its own; all applied records become
    // visible to readers together.
    std::vector<CommitOutcome> commit(std::vector<CollectionRecord> records);
    void replace(RepositoryState state);

private:
    mutable std::mutex read_mutex_;
    std::mutex write_mutex_;
    std::shared_ptr<const RepositoryState> current_;
};

} // namespace colloc
