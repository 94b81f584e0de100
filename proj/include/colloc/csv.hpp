#pragma once
// Minimal RFC 4180 reader/writer: comma separator, double-quote quoting with
// "" escapes, quoted fields may span lines. CRLF and LF both accepted.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace colloc::csv {

struct Row {
    std::size_t line = 0; // physical line the row starts on (1-based)
    std::vector<std::string> fields;
};

class Reader {
public:
    // `text` must outlive the reader.
    explicit Reader(std::string_view text) : text_(text) {}

    // Throws IngestError on an unterminated quoted field.
    std::optional<Row> next();

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

std::string quote(std::string_view field);
std::string format_row(const std::vector<std::string>& fields);

} // namespace colloc::csv
