#pragma once

// Field-level text I/O shared by the graph serializer and the
// workspace persistence code. Doubles use shortest round-trip form so
// deterministic state always produces deterministic bytes.

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sstg/errors.hpp"

namespace sstg::detail {

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw DomainError("cannot format number");
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view s, const std::string& where) {
    double out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(where + ": bad number '" + std::string(s) + "'");
    return out;
}

inline std::int64_t parse_int(std::string_view s, const std::string& where) {
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(where + ": bad integer '" + std::string(s) + "'");
    return out;
}

inline std::uint64_t parse_uint(std::string_view s, const std::string& where) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(where + ": bad count '" + std::string(s) + "'");
    return out;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

// Calls fn(line, lineno) for every line, tolerating a missing final
// newline; blank lines are skipped.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t pos = 0;
    std::size_t lineno = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++lineno;
        if (line.empty()) continue;
        fn(line, lineno);
    }
}

}  // namespace sstg::detail
