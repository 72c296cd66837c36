#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tg {

// Bad argument or precondition violated by the caller.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Node id outside [0, num_nodes).
class BoundsError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// A raw record was rejected during ingestion. record_index is the position in the input.
class IngestError : public std::runtime_error {
public:
    IngestError(std::size_t record_index, const std::string& what)
        : std::runtime_error("record " + std::to_string(record_index) + ": " + what),
          record_index_(record_index) {}

    std::size_t record_index() const noexcept { return record_index_; }

private:
    std::size_t record_index_;
};

// Malformed text input. line is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SplitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tg
