#include "surrbound/error.hpp"

namespace surrbound {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAProbability: return "NotAProbability";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::InvalidTable: return "InvalidTable";
    case ErrorCode::BadGamma: return "BadGamma";
    case ErrorCode::WrongScale: return "WrongScale";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::InfeasibleInputs: return "InfeasibleInputs";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::ZeroControlRisk: return "ZeroControlRisk";
    case ErrorCode::TooManyCombinations: return "TooManyCombinations";
    case ErrorCode::EmptyPolyhedron: return "EmptyPolyhedron";
    case ErrorCode::PremiseViolated: return "PremiseViolated";
    case ErrorCode::FileError: return "FileError";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::AllReplicatesInfeasible: return "AllReplicatesInfeasible";
    case ErrorCode::DegenerateArm: return "DegenerateArm";
  }
  return "Unknown";
}

}  // namespace surrbound
