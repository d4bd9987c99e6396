#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sstg {

// A lowercased word with the surrounding punctuation stripped.
struct Token {
    std::string text;
    std::size_t position = 0;  // ordinal within its sentence
};

// One sentence of a document, indexed by proper time t (sentence
// ordinal within the document, counted over non-empty sentences).
// importance and retained are filled in downstream.
struct SentenceEvent {
    std::uint64_t id = 0;  // unique across the corpus, assigned by the pipeline
    std::int64_t t = 0;
    std::string doc;
    std::vector<Token> tokens;
    std::string text;  // original sentence, whitespace collapsed
    double importance = 0.0;
    bool retained = false;
};

// A run of leg_size consecutive sentences; the final leg may be short.
struct Leg {
    std::uint64_t index = 0;
    std::string doc;
    std::int64_t begin = 0;  // half-open span of sentence ordinals
    std::int64_t end = 0;
};

struct IngestOptions {
    std::string terminators = ".?!";
};

// Splits UTF-8 text into sentences and tokens using nothing but
// whitespace and the terminator characters. A terminator only ends a
// sentence when followed by whitespace or end of input, so decimals
// ("3.14") pass through intact while abbreviations ("Mr. Smith") split
// incorrectly -- accepted noise. Tokens are lowercased (ASCII) and
// have leading/trailing punctuation removed; interior hyphens and
// apostrophes survive. Empty sentences are dropped and proper time t
// is assigned over the survivors.
//
// Throws IngestError naming the byte offset on invalid UTF-8.
std::vector<SentenceEvent> tokenize_document(std::string_view raw, const std::string& doc_id,
                                             const IngestOptions& opts = {});

// Reads a whole file as bytes. Throws IngestError if unreadable.
std::string read_text_file(const std::string& path);

// Partitions [0, sentence_count) into consecutive legs of leg_size,
// emitting a final partial leg when non-empty.
// Throws ConfigError when leg_size is zero.
std::vector<Leg> segment_legs(std::uint64_t sentence_count, std::uint64_t leg_size,
                              const std::string& doc_id);

}  // namespace sstg
