#pragma once
// Annotation file import.
//
// File layout (comma-separated, header mandatory):
//
//   biobank,collection,attribute,concept_code,vocabulary,
//   completeness,accuracy,reliability,timeliness,consistency[,description]
//
// - attribute empty        -> collection-level row (quality only)
// - concept_code present   -> vocabulary required; annotates the attribute
// - quality cells          -> fraction ("0.85") or percent ("85%"); empty = absent
// - concept_code "_description" with empty attribute and vocabulary carries
//   the collection description in a trailing column
//
// parse -> stage -> commit. Parsing and staging are pure; commit goes through
// the repository's single-writer path.

#include "colloc/error.hpp"
#include "colloc/quality.hpp"
#include "colloc/repository.hpp"
#include "colloc/vocabulary.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace colloc {

inline constexpr const char* kDescriptionMarker = "_description";

struct AnnotationRow {
    std::size_t line = 0;
    std::string biobank;
    std::string collection;
    std::string attribute;
    std::optional<ConceptKey> concept_key;
    QualityMap quality;
    std::optional<std::string> description;

    bool collection_level() const { return attribute.empty(); }
    bool operator==(const AnnotationRow&) const = default;
};

struct ParsedAnnotations {
    std::vector<AnnotationRow> rows;
    std::vector<Diagnostic> diagnostics;
};

// Throws IngestError when the header is missing a required column. Invalid
// data rows are dropped with an error diagnostic.
ParsedAnnotations parse_annotation_file(std::string_view text);

struct StagedCollection {
    CollectionRecord record;
    std::size_t first_line = 0;
    std::size_t row_count = 0;
};

struct StagedAnnotations {
    std::vector<StagedCollection> collections; // in first-seen order
    std::vector<Diagnostic> diagnostics;
};

StagedAnnotations stage(const std::vector<AnnotationRow>& rows, const VocabularyStore& store);

struct IngestReport {
    std::size_t accepted_rows = 0;
    std::size_t collections_touched = 0;
    std::vector<Diagnostic> diagnostics;
};

// Commits every staged collection that passes repository validation; invalid
// ones are skipped with an error diagnostic at their first source line.
IngestReport commit(const std::vector<StagedCollection>& staged, Repository& repo);

// parse + stage + commit, with all diagnostics merged and sorted by line.
IngestReport ingest_annotation_file(std::string_view text, Repository& repo);

// Renders records back into the annotation file dialect. Parsing and staging
// the output reproduces the records.
std::string serialize_annotation_file(const std::vector<CollectionRecord>& records);

} // namespace colloc
