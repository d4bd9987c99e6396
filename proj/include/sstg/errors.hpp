#pragma once

#include <stdexcept>
#include <string>

namespace sstg {

// Base for all library errors. Subclasses distinguish recoverable
// input problems from caller mistakes (ordering, staleness).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input bytes (encoding); message names the byte offset.
class IngestError : public Error {
public:
    using Error::Error;
};

// Invalid configuration value.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Ticks moved backwards, or inputs were not sorted by proper time.
class OrderingError : public Error {
public:
    using Error::Error;
};

// Malformed graph file; message names the line number.
class ParseError : public Error {
public:
    using Error::Error;
};

// Unknown node, fragment, or command target.
class LookupError : public Error {
public:
    using Error::Error;
};

// A query that requires a completed sleep pass ran against a graph
// that has not been slept.
class StalenessError : public Error {
public:
    using Error::Error;
};

// Degenerate data reached an operation that cannot define a result
// (empty hub fragment set, zero-length ratio window, oversized splice).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace sstg
