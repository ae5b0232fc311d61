#include <numaopt/common/csv.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>

namespace numaopt::csv {

std::string format_double(double v) {
    if (v == 0.0) {
        return "0"; // folds -0 into 0
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, end);
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

void check_identifier(std::string_view id, std::string_view what) {
    if (id.empty() || id.find_first_of(",\n\r\"") != std::string_view::npos) {
        throw std::invalid_argument(std::string{what} + " '" + std::string{id} +
                                    "' must be non-empty and free of commas, quotes, newlines");
    }
}

namespace {

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

} // namespace

Reader::Reader(std::istream& in, const std::vector<std::string>& required)
    : in_(in) {
    std::string line;
    if (!std::getline(in_, line)) {
        throw ParseError(1, "missing header row");
    }
    strip_cr(line);
    header_ = split(line);
    for (const auto& col : required) {
        if (std::find(header_.begin(), header_.end(), col) == header_.end()) {
            throw ParseError(1, "missing column '" + col + "'");
        }
    }
}

bool Reader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++row_;
        strip_cr(line);
        if (line.empty()) {
            continue;
        }
        fields_ = split(line);
        if (fields_.size() != header_.size()) {
            throw ParseError(row_, "expected " + std::to_string(header_.size()) +
                                       " fields, got " + std::to_string(fields_.size()));
        }
        return true;
    }
    return false;
}

std::size_t Reader::index_of(const std::string& column) const {
    auto it = std::find(header_.begin(), header_.end(), column);
    if (it == header_.end()) {
        throw ParseError(row_, "unknown column '" + column + "'");
    }
    return static_cast<std::size_t>(it - header_.begin());
}

const std::string& Reader::text(const std::string& column) const {
    return fields_.at(index_of(column));
}

double Reader::number(const std::string& column) const {
    const std::string& s = text(column);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError(row_, "column '" + column + "': not a finite number: '" + s + "'");
    }
    return v;
}

long long Reader::integer(const std::string& column) const {
    const std::string& s = text(column);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError(row_, "column '" + column + "': not an integer: '" + s + "'");
    }
    return v;
}

} // namespace numaopt::csv
