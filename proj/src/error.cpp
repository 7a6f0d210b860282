#include "nidsfs/error.hpp"

namespace nidsfs {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::UnknownLabelColumn: return "UnknownLabelColumn";
    case ErrorCode::UnmappableLabel: return "UnmappableLabel";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::TooFewRecords: return "TooFewRecords";
    case ErrorCode::TooManyPartitions: return "TooManyPartitions";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyTransactions: return "EmptyTransactions";
    case ErrorCode::AntecedentAbsent: return "AntecedentAbsent";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::SingleClassTraining: return "SingleClassTraining";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DivergedLoss: return "DivergedLoss";
    case ErrorCode::UnfittedModel: return "UnfittedModel";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace nidsfs
