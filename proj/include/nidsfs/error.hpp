#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace nidsfs {

/// Failure kinds raised by the library. Each kind belongs to one category,
/// which the CLI maps onto its exit code.
enum class ErrorCode {
  // configuration / validation
  InvalidConfig,
  InvalidSpec,
  // data
  FileNotFound,
  MalformedCsv,
  UnknownLabelColumn,
  UnmappableLabel,
  EmptyDataset,
  TooFewRecords,
  TooManyPartitions,
  LengthMismatch,
  EmptyTransactions,
  AntecedentAbsent,
  UnknownFeature,
  SingleClassTraining,
  SchemaMismatch,
  TooFewRows,
  EmptyInput,
  // runtime / numeric
  DivergedLoss,
  UnfittedModel,
  IoError,
};

enum class ErrorCategory { Config, Data, Runtime };

constexpr ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidSpec:
      return ErrorCategory::Config;
    case ErrorCode::DivergedLoss:
    case ErrorCode::UnfittedModel:
    case ErrorCode::IoError:
      return ErrorCategory::Runtime;
    default:
      return ErrorCategory::Data;
  }
}

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

/// Error tied to a 1-based data row (header excluded) of an input file.
class RowError : public Error {
 public:
  RowError(ErrorCode code, std::size_t row, std::string token, const std::string& message)
      : Error(code, message), row_(row), token_(std::move(token)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t row_;
  std::string token_;
};

}  // namespace nidsfs
