#pragma once

#include <stdexcept>
#include <string>

namespace codestab {

enum class ErrorKind {
  UnknownLanguage,
  DuplicateGrammar,
  InvalidBackend,
  EmptyInput,
  ParseFailure,
  InvalidNode,
  InvalidTree,
  InvalidConfig,
  MalformedSymbol,
  EmptyDistribution,
  SupportMismatch,
  InvalidEpsilon,
  UnsmoothedZero,
  DegenerateScore,
  InsufficientData,
  EmptyReport,
  DatasetFormat,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when a source text cannot be turned into a usable tree.
class ParseError : public Error {
 public:
  ParseError(std::string language, std::string diagnostic)
      : Error(ErrorKind::ParseFailure,
              "failed to parse " + language + " source: " + diagnostic),
        language_(std::move(language)),
        diagnostic_(std::move(diagnostic)) {}

  const std::string& language() const noexcept { return language_; }
  const std::string& diagnostic() const noexcept { return diagnostic_; }

 private:
  std::string language_;
  std::string diagnostic_;
};

// Dataset line that failed to decode; line numbers are 1-based.
class DatasetError : public Error {
 public:
  DatasetError(std::size_t line, const std::string& message)
      : Error(ErrorKind::DatasetFormat,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace codestab
