#include "colloc/csv.hpp"

#include "colloc/error.hpp"

namespace colloc::csv {

std::optional<Row> Reader::next() {
    if (pos_ == 0 && text_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    if (pos_ >= text_.size()) return std::nullopt;

    Row row;
    row.line = line_;
    std::string field;
    bool quoted = false;
    bool field_started_quoted = false;
    while (pos_ < text_.size()) {
        char ch = text_[pos_++];
        if (quoted) {
            if (ch == '"') {
                if (pos_ < text_.size() && text_[pos_] == '"') {
                    field.push_back('"');
                    ++pos_;
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"' && field.empty() && !field_started_quoted) {
            quoted = true;
            field_started_quoted = true;
        } else if (ch == ',') {
            row.fields.push_back(std::move(field));
            field.clear();
            field_started_quoted = false;
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
            ++line_;
            row.fields.push_back(std::move(field));
            return row;
        } else {
            field.push_back(ch);
        }
    }
    if (quoted) throw IngestError("line " + std::to_string(row.line) + ": unterminated quoted field");
    row.fields.push_back(std::move(field));
    return row;
}

std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += quote(fields[i]);
    }
    out += "\n";
    return out;
}

} // namespace colloc::csv
