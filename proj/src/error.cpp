#include "espresso/error.hpp"

namespace espresso {

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::EmptyInput: return "EmptyInput";
  case ErrorCode::NonFinite: return "NonFinite";
  case ErrorCode::RaggedChannels: return "RaggedChannels";
  case ErrorCode::OutOfRange: return "OutOfRange";
  case ErrorCode::LengthMismatch: return "LengthMismatch";
  case ErrorCode::SubseqTooLong: return "SubseqTooLong";
  case ErrorCode::InvalidSpec: return "InvalidSpec";
  case ErrorCode::NoCandidates: return "NoCandidates";
  case ErrorCode::DegenerateSegment: return "DegenerateSegment";
  case ErrorCode::InvalidBoundaries: return "InvalidBoundaries";
  case ErrorCode::TraceTooShort: return "TraceTooShort";
  case ErrorCode::InvalidConfig: return "InvalidConfig";
  case ErrorCode::EmptyEstimate: return "EmptyEstimate";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::MissingColumn: return "MissingColumn";
  case ErrorCode::NonNumeric: return "NonNumeric";
  case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

NonFiniteError::NonFiniteError(std::size_t channel, std::size_t index)
    : Error(ErrorCode::NonFinite, "channel " + std::to_string(channel) +
                                      ", index " + std::to_string(index)),
      channel_(channel), index_(index) {}

TableError::TableError(ErrorCode code, std::size_t row, std::size_t column,
                       const std::string& detail)
    : Error(code, "row " + std::to_string(row) + ", column " +
                      std::to_string(column) + ": " + detail),
      row_(row), column_(column) {}

} // namespace espresso
