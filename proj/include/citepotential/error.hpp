#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace citepotential {

enum class ErrorCode {
  // core-model
  UnknownJournal,
  MissingPublicationCount,
  WindowMismatch,
  InvalidWindow,
  InvalidJournalId,
  // ingest
  MalformedHeader,
  MalformedRow,
  NegativeCount,
  NegativeValue,
  DuplicateKey,
  DuplicatePair,
  // metrics
  ZeroDenominator,
  EmptyDatabase,
  NonPositiveDatabasePotential,
  // stats
  InsufficientData,
  ZeroVariance,
  EmptySeries,
  InsufficientGroups,
  EmptyGroup,
  // report-cli
  InvalidConfig,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownJournal: return "UnknownJournal";
    case ErrorCode::MissingPublicationCount: return "MissingPublicationCount";
    case ErrorCode::WindowMismatch: return "WindowMismatch";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::InvalidJournalId: return "InvalidJournalId";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NegativeCount: return "NegativeCount";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::DuplicatePair: return "DuplicatePair";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::EmptyDatabase: return "EmptyDatabase";
    case ErrorCode::NonPositiveDatabasePotential: return "NonPositiveDatabasePotential";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::InsufficientGroups: return "InsufficientGroups";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace citepotential
