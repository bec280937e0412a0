#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace espresso {

enum class ErrorCode {
  EmptyInput,
  NonFinite,
  RaggedChannels,
  OutOfRange,
  LengthMismatch,
  SubseqTooLong,
  InvalidSpec,
  NoCandidates,
  DegenerateSegment,
  InvalidBoundaries,
  TraceTooShort,
  InvalidConfig,
  EmptyEstimate,
  ParseError,
  MissingColumn,
  NonNumeric,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code lets
/// callers (the CLI in particular) map failures onto exit statuses without
/// parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// NonFinite carries the offending position.
class NonFiniteError : public Error {
public:
  NonFiniteError(std::size_t channel, std::size_t index);

  std::size_t channel() const noexcept { return channel_; }
  std::size_t index() const noexcept { return index_; }

private:
  std::size_t channel_;
  std::size_t index_;
};

/// Row/column aware error for tabular input. Rows are 1-based file lines.
class TableError : public Error {
public:
  TableError(ErrorCode code, std::size_t row, std::size_t column,
             const std::string& detail);

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t row_;
  std::size_t column_;
};

} // namespace espresso
