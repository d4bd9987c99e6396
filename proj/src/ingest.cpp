#include "sstg/ingest.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "sstg/errors.hpp"

namespace sstg {

namespace {

bool is_space_byte(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Returns the length of the UTF-8 sequence starting at offset, or 0 if
// the sequence is malformed.
std::size_t utf8_len(std::string_view s, std::size_t i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    if (c < 0x80) len = 1;
    else if ((c & 0xE0) == 0xC0) len = 2;
    else if ((c & 0xF0) == 0xE0) len = 3;
    else if ((c & 0xF8) == 0xF0) len = 4;
    else return 0;
    if (i + len > s.size()) return 0;
    for (std::size_t k = 1; k < len; ++k)
        if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 0;
    return len;
}

void validate_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t len = utf8_len(s, i);
        if (len == 0)
            throw IngestError("invalid UTF-8 at byte offset " + std::to_string(i));
        i += len;
    }
}

// Punctuation that gets stripped from token edges: all ASCII
// non-alphanumerics plus the common typographic marks.
const std::array<std::string_view, 10> kWidePunct = {
    "“", "”", "‘", "’", "—",
    "–", "…", "«", "»", "´",
};

// Length of the punctuation mark starting at i, or 0 if the character
// there is not punctuation.
std::size_t punct_len(std::string_view s, std::size_t i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) return std::isalnum(c) ? 0 : 1;
    for (std::string_view p : kWidePunct)
        if (s.compare(i, p.size(), p) == 0) return p.size();
    return 0;
}

// Strips punctuation from both edges of a whitespace-free chunk and
// lowercases the ASCII letters. May return an empty string.
std::string clean_token(std::string_view chunk) {
    std::size_t begin = 0;
    while (begin < chunk.size()) {
        std::size_t p = punct_len(chunk, begin);
        if (p == 0) break;
        begin += p;
    }
    // Find the end by scanning forward, remembering the last position
    // where a non-punctuation character ended.
    std::size_t end = begin;
    std::size_t i = begin;
    while (i < chunk.size()) {
        std::size_t p = punct_len(chunk, i);
        if (p == 0) {
            std::size_t l = utf8_len(chunk, i);
            if (l == 0) l = 1;  // validated earlier; defensive for stray bytes
            i += l;
            end = i;
        } else {
            i += p;
        }
    }
    std::string out;
    out.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) {
        unsigned char c = static_cast<unsigned char>(chunk[k]);
        out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : chunk[k]);
    }
    return out;
}

std::string collapse_whitespace(std::string_view span) {
    std::string out;
    out.reserve(span.size());
    bool in_space = true;  // trims leading space
    for (char ch : span) {
        if (is_space_byte(static_cast<unsigned char>(ch))) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(ch);
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

}  // namespace

std::vector<SentenceEvent> tokenize_document(std::string_view raw, const std::string& doc_id,
                                             const IngestOptions& opts) {
    validate_utf8(raw);

    std::vector<SentenceEvent> out;
    std::int64_t t = 0;
    std::size_t sentence_begin = 0;
    std::size_t i = 0;

    auto flush = [&](std::size_t end_excl) {
        std::string_view span = raw.substr(sentence_begin, end_excl - sentence_begin);
        sentence_begin = end_excl;

        SentenceEvent ev;
        ev.doc = doc_id;
        std::size_t pos = 0;
        std::size_t k = 0;
        while (k < span.size()) {
            while (k < span.size() && is_space_byte(static_cast<unsigned char>(span[k]))) ++k;
            std::size_t start = k;
            while (k < span.size() && !is_space_byte(static_cast<unsigned char>(span[k]))) ++k;
            if (k == start) break;
            std::string word = clean_token(span.substr(start, k - start));
            if (!word.empty()) ev.tokens.push_back(Token{std::move(word), pos++});
        }
        if (ev.tokens.empty()) return;  // empty sentences are dropped
        ev.text = collapse_whitespace(span);
        ev.t = t++;
        out.push_back(std::move(ev));
    };

    while (i < raw.size()) {
        char c = raw[i];
        if (opts.terminators.find(c) != std::string::npos) {
            bool at_end = i + 1 >= raw.size();
            bool before_space =
                !at_end && is_space_byte(static_cast<unsigned char>(raw[i + 1]));
            if (at_end || before_space) {
                flush(i + 1);
                ++i;
                continue;
            }
        }
        i += std::max<std::size_t>(1, utf8_len(raw, i));
    }
    if (sentence_begin < raw.size()) flush(raw.size());
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<Leg> segment_legs(std::uint64_t sentence_count, std::uint64_t leg_size,
                              const std::string& doc_id) {
    if (leg_size == 0) throw ConfigError("leg_size must be >= 1");
    std::vector<Leg> legs;
    std::uint64_t index = 0;
    for (std::uint64_t begin = 0; begin < sentence_count; begin += leg_size) {
        Leg leg;
        leg.index = index++;
        leg.doc = doc_id;
        leg.begin = static_cast<std::int64_t>(begin);
        leg.end = static_cast<std::int64_t>(std::min(sentence_count, begin + leg_size));
        legs.push_back(std::move(leg));
    }
    return legs;
}

}  // namespace sstg
