#include "error.hpp"

namespace equiorbit {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kNotFinite: return "not-finite";
    case ErrorCode::kInvalidPair: return "invalid-pair";
    case ErrorCode::kIncompatibleMasses: return "incompatible-masses";
    case ErrorCode::kDegenerateCore: return "degenerate-core";
    case ErrorCode::kInvalidData: return "invalid-data";
    case ErrorCode::kIncompatibleSum: return "incompatible-sum";
    case ErrorCode::kPlanarDegenerate: return "planar-degenerate";
    case ErrorCode::kInvalidFrame: return "invalid-frame";
    case ErrorCode::kUnsupportedExponent: return "unsupported-exponent";
    case ErrorCode::kInvalidConfiguration: return "invalid-configuration";
    case ErrorCode::kInvalidWitness: return "invalid-witness";
    case ErrorCode::kGradientUndefined: return "gradient-undefined";
    case ErrorCode::kInvalidPeriod: return "invalid-period";
    case ErrorCode::kEmptyConstraint: return "empty-constraint";
    case ErrorCode::kNearCollision: return "near-collision";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown-error";
}

}  // namespace equiorbit
