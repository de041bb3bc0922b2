#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wsa {

enum class ErrorCode {
  InvalidArgument,
  MalformedDocument,
  BadColumnCount,
  EmptyLemma,
  MissingFile,
  IoFailure,
  NonPositiveAlpha,
  InconsistentDimension,
  EmptyFile,
  EmptyDefinition,
  BadWeight,
  InvalidSenseIndex,
  EmptyDataset,
  DimensionMismatch,
  EmptyData,
  TooLargeToEnumerate,
  SingleClassData,
  EmptyTestSet,
  MatchingImpossible,
  EmptySide,
  EmptyGold,
  EmptyInput,
  LengthMismatch,
  UnknownLabel,
  InsufficientData,
  ConfigError,
  ResourceMissing,
  PortInUse,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::BadColumnCount: return "BadColumnCount";
    case ErrorCode::EmptyLemma: return "EmptyLemma";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::InconsistentDimension: return "InconsistentDimension";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::EmptyDefinition: return "EmptyDefinition";
    case ErrorCode::BadWeight: return "BadWeight";
    case ErrorCode::InvalidSenseIndex: return "InvalidSenseIndex";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::TooLargeToEnumerate: return "TooLargeToEnumerate";
    case ErrorCode::SingleClassData: return "SingleClassData";
    case ErrorCode::EmptyTestSet: return "EmptyTestSet";
    case ErrorCode::MatchingImpossible: return "MatchingImpossible";
    case ErrorCode::EmptySide: return "EmptySide";
    case ErrorCode::EmptyGold: return "EmptyGold";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ResourceMissing: return "ResourceMissing";
    case ErrorCode::PortInUse: return "PortInUse";
  }
  return "Unknown";
}

/// Every failure surfaced by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wsa
