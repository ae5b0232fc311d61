#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace numaopt::csv {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// Thrown for malformed input; `row()` is the 1-based line number in the file
/// (the header is line 1).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t row, const std::string& what)
        : std::runtime_error("row " + std::to_string(row) + ": " + what)
        , row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Header-addressed reader for the plain comma-separated files this project
/// writes (no quoting, no embedded commas).
class Reader {
public:
    /// Reads the header line; throws ParseError if any of `required` is missing.
    Reader(std::istream& in, const std::vector<std::string>& required);

    /// Advances to the next non-empty row. Returns false at end of input.
    bool next();

    std::size_t row_number() const noexcept { return row_; }
    const std::string& text(const std::string& column) const;
    double number(const std::string& column) const;
    long long integer(const std::string& column) const;

private:
    std::size_t index_of(const std::string& column) const;

    std::istream& in_;
    std::vector<std::string> header_;
    std::vector<std::string> fields_;
    std::size_t row_ = 1;
};

std::vector<std::string> split(std::string_view line, char sep = ',');

/// Rejects identifiers that would break the unquoted CSV format.
void check_identifier(std::string_view id, std::string_view what);

} // namespace numaopt::csv
