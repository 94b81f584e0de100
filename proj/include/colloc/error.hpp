#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace colloc {

enum class Severity { warning, error };

// One finding from loading or ingesting a tabular source. `line` is the
// 1-based physical line the offending row starts on (header is line 1).
struct Diagnostic {
    std::size_t line = 0;
    Severity severity = Severity::warning;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

const char* to_string(Severity s);

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fatal problem in the vocabulary tables (duplicate id, "Is a" cycle,
// missing column).
class VocabularyError : public Error {
public:
    using Error::Error;
};

// Malformed or out-of-range repository snapshot.
class SnapshotError : public Error {
public:
    using Error::Error;
};

// Annotation file cannot be processed at all (e.g. missing header column).
class IngestError : public Error {
public:
    using Error::Error;
};

// Query rejected before evaluation (empty seed list, inverted range, ...).
class InvalidQuery : public Error {
public:
    InvalidQuery(std::string code, const std::string& message)
        : Error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// A collection record that violates repository invariants.
class RecordRejected : public Error {
public:
    explicit RecordRejected(std::vector<std::string> problems);

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

} // namespace colloc
