#include "colloc/ingest.hpp"

#include "colloc/csv.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>

namespace colloc {

namespace {

constexpr std::array<const char*, 5> kKeyColumns{"biobank", "collection", "attribute", "concept_code", "vocabulary"};

struct Columns {
    std::size_t biobank, collection, attribute, code, vocabulary;
    std::array<std::size_t, 5> quality;
    std::optional<std::size_t> description;
    std::size_t width = 0; // header column count
};

Columns read_header(const csv::Row& header) {
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < header.fields.size(); ++i)
        pos.emplace(detail::lower(detail::trim(header.fields[i])), i);
    auto need = [&](const std::string& name) {
        auto it = pos.find(name);
        if (it == pos.end()) throw IngestError("line 1: header is missing column '" + name + "'");
        return it->second;
    };
    Columns c{};
    c.biobank = need(kKeyColumns[0]);
    c.collection = need(kKeyColumns[1]);
    c.attribute = need(kKeyColumns[2]);
    c.code = need(kKeyColumns[3]);
    c.vocabulary = need(kKeyColumns[4]);
    for (std::size_t i = 0; i < kAllCharacteristics.size(); ++i) c.quality[i] = need(to_string(kAllCharacteristics[i]));
    if (auto it = pos.find("description"); it != pos.end()) c.description = it->second;
    c.width = header.fields.size();
    return c;
}

std::string format_fraction(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

} // namespace

ParsedAnnotations parse_annotation_file(std::string_view text) {
    ParsedAnnotations out;
    csv::Reader reader(text);
    auto header = reader.next();
    if (!header) throw IngestError("line 1: annotation file is empty (header row required)");
    const auto cols = read_header(*header);

    auto error = [&](std::size_t line, std::string msg) {
        out.diagnostics.push_back({line, Severity::error, std::move(msg)});
    };

    while (auto row = reader.next()) {
        auto& f = row->fields;
        if (f.size() == 1 && detail::trim(f[0]).empty()) continue;
        if (f.size() < cols.width) {
            error(row->line, "expected " + std::to_string(cols.width) + " columns, found " + std::to_string(f.size()));
            continue;
        }
        auto cell = [&](std::size_t i) { return std::string(detail::trim(f[i])); };

        AnnotationRow r;
        r.line = row->line;
        r.biobank = cell(cols.biobank);
        r.collection = cell(cols.collection);
        r.attribute = cell(cols.attribute);
        auto code = cell(cols.code);
        auto vocab = cell(cols.vocabulary);

        if (r.biobank.empty() || r.collection.empty()) {
            error(r.line, "biobank and collection are required");
            continue;
        }

        bool bad = false;
        for (std::size_t q = 0; q < kAllCharacteristics.size(); ++q) {
            auto raw = cell(cols.quality[q]);
            if (raw.empty()) continue;
            auto v = parse_fraction(raw);
            if (!v) {
                error(r.line, std::string(to_string(kAllCharacteristics[q])) + " value '" + raw +
                                  "' is not a fraction in [0,1] or a percentage");
                bad = true;
                continue;
            }
            r.quality[kAllCharacteristics[q]] = *v;
        }
        if (bad) continue;

        bool description_row = r.attribute.empty() && code == kDescriptionMarker && vocab.empty();
        if (description_row) {
            if (cols.description) r.description = f[*cols.description];
            else if (f.size() > cols.width) r.description = f[cols.width];
            else r.description = std::string{};
        } else {
            if (f.size() > cols.width &&
                std::any_of(f.begin() + static_cast<std::ptrdiff_t>(cols.width), f.end(),
                            [](const std::string& s) { return !detail::trim(s).empty(); }))
                out.diagnostics.push_back({r.line, Severity::warning, "extra trailing columns ignored"});
            if (code.empty() != vocab.empty()) {
                error(r.line, "concept_code and vocabulary must be given together");
                continue;
            }
            if (!code.empty()) {
                if (r.collection_level()) {
                    error(r.line, "collection-level rows cannot carry a concept annotation");
                    continue;
                }
                r.concept_key = ConceptKey{code, vocab};
            }
            if (!r.concept_key && r.quality.empty()) {
                error(r.line, "row carries neither a concept annotation nor quality values");
                continue;
            }
        }
        out.rows.push_back(std::move(r));
    }
    return out;
}

StagedAnnotations stage(const std::vector<AnnotationRow>& rows, const VocabularyStore& store) {
    StagedAnnotations out;
    std::map<CollectionKey, std::size_t> slot;

    auto merge_quality = [&](QualityMap& into, const QualityMap& from, std::size_t line, const std::string& where) {
        for (const auto& [c, v] : from) {
            auto [it, inserted] = into.emplace(c, v);
            if (!inserted && it->second != v) {
                out.diagnostics.push_back({line, Severity::warning,
                                           "conflicting " + std::string(to_string(c)) + " for " + where + " (" +
                                               format_fraction(it->second) + " vs " + format_fraction(v) +
                                               "); last value wins"});
                it->second = v;
            }
        }
    };

    for (const auto& r : rows) {
        CollectionKey key{r.biobank, r.collection};
        auto [it, inserted] = slot.emplace(key, out.collections.size());
        if (inserted) {
            StagedCollection sc;
            sc.record.biobank = r.biobank;
            sc.record.name = r.collection;
            sc.first_line = r.line;
            out.collections.push_back(std::move(sc));
        }
        auto& sc = out.collections[it->second];
        auto& rec = sc.record;
        ++sc.row_count;
        const auto where_collection = "collection " + to_string(key);

        if (r.description) {
            if (!rec.description.empty() && rec.description != *r.description)
                out.diagnostics.push_back({r.line, Severity::warning,
                                           "conflicting description for " + where_collection + "; last value wins"});
            rec.description = *r.description;
        }
        if (r.collection_level()) {
            merge_quality(rec.quality, r.quality, r.line, where_collection);
            continue;
        }

        auto attr = std::find_if(rec.attributes.begin(), rec.attributes.end(),
                                 [&](const AttributeRecord& a) { return a.name == r.attribute; });
        if (attr == rec.attributes.end()) {
            rec.attributes.push_back({r.attribute, {}, {}});
            attr = std::prev(rec.attributes.end());
        }
        if (r.concept_key) {
            attr->concepts.insert(*r.concept_key);
            if (!store.find(*r.concept_key))
                out.diagnostics.push_back({r.line, Severity::warning,
                                           "concept " + to_string(*r.concept_key) +
                                               " not found in vocabulary; stored as unresolved"});
        }
        merge_quality(attr->quality, r.quality, r.line, "attribute " + r.attribute + " of " + where_collection);
    }
    return out;
}

IngestReport commit(const std::vector<StagedCollection>& staged, Repository& repo) {
    std::vector<CollectionRecord> records;
    records.reserve(staged.size());
    for (const auto& s : staged) records.push_back(s.record);
    auto outcomes = repo.commit(std::move(records));

    IngestReport report;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        if (o.committed) {
            report.accepted_rows += staged[i].row_count;
            ++report.collections_touched;
            continue;
        }
        std::string msg = "collection " + to_string(o.key) + " not committed";
        for (const auto& p : o.problems) msg += "; " + p;
        report.diagnostics.push_back({staged[i].first_line, Severity::error, std::move(msg)});
    }
    return report;
}

IngestReport ingest_annotation_file(std::string_view text, Repository& repo) {
    auto parsed = parse_annotation_file(text);
    auto snap = repo.snapshot();
    auto staged = stage(parsed.rows, snap->store());
    auto report = commit(staged.collections, repo);

    std::vector<Diagnostic> all = std::move(parsed.diagnostics);
    all.insert(all.end(), staged.diagnostics.begin(), staged.diagnostics.end());
    all.insert(all.end(), report.diagnostics.begin(), report.diagnostics.end());
    std::stable_sort(all.begin(), all.end(), [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    report.diagnostics = std::move(all);
    return report;
}

std::string serialize_annotation_file(const std::vector<CollectionRecord>& records) {
    std::vector<std::string> header(kKeyColumns.begin(), kKeyColumns.end());
    for (auto c : kAllCharacteristics) header.emplace_back(to_string(c));
    header.emplace_back("description");
    std::string out = csv::format_row(header);

    auto row = [&](const CollectionRecord& rec, const std::string& attribute, const ConceptKey* key,
                   const QualityMap* quality, const std::string* description) {
        std::vector<std::string> f{rec.biobank, rec.name, attribute};
        if (key) {
            f.push_back(key->code);
            f.push_back(key->vocabulary);
        } else if (description) {
            f.emplace_back(kDescriptionMarker);
            f.emplace_back();
        } else {
            f.emplace_back();
            f.emplace_back();
        }
        for (auto c : kAllCharacteristics) {
            if (quality) {
                auto it = quality->find(c);
                f.push_back(it == quality->end() ? std::string{} : format_fraction(it->second));
            } else {
                f.emplace_back();
            }
        }
        f.push_back(description ? *description : std::string{});
        out += csv::format_row(f);
    };

    for (const auto& rec : records) {
        if (!rec.description.empty()) row(rec, "", nullptr, nullptr, &rec.description);
        if (!rec.quality.empty()) row(rec, "", nullptr, &rec.quality, nullptr);
        for (const auto& a : rec.attributes) {
            const QualityMap* q = a.quality.empty() ? nullptr : &a.quality;
            if (a.concepts.empty()) {
                if (q) row(rec, a.name, nullptr, q, nullptr);
                continue;
            }
            for (const auto& k : a.concepts) {
                row(rec, a.name, &k, q, nullptr);
                q = nullptr;
            }
        }
    }
    return out;
}

} // namespace colloc
