#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reprocheck {

/// Base for every error raised by the library. The CLI maps subclasses
/// onto its exit-code contract.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Readme retrieval.
class NetworkError : public Error { using Error::Error; };
class NotFound : public Error { using Error::Error; };
class NotMarkdown : public Error { using Error::Error; };

// Template files.
class ParseError : public Error { using Error::Error; };
class ValidationError : public Error { using Error::Error; };

// Classification.
class BackendError : public Error { using Error::Error; };

// Scoring and metrics.
class ShapeError : public Error { using Error::Error; };
class EmptyInput : public Error { using Error::Error; };
class LengthMismatch : public Error { using Error::Error; };
class ZeroVariance : public Error { using Error::Error; };
class UnknownLabel : public Error { using Error::Error; };

/// A corpus JSONL line that does not match the documented record shape.
/// `line()` is 1-based.
class CorpusFormatError : public Error {
public:
    CorpusFormatError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    /// Not tied to a line, e.g. an empty corpus.
    explicit CorpusFormatError(const std::string& what) : Error(what), line_(0) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace reprocheck
