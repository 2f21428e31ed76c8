#pragma once

#include <stdexcept>
#include <string>

namespace equiorbit {

// Mirrors eo_status in the C header; keep the numeric values in sync.
enum class ErrorCode {
  kInvalidParameter = 1,
  kNotFinite = 2,
  kInvalidPair = 3,
  kIncompatibleMasses = 4,
  kDegenerateCore = 5,
  kInvalidData = 6,
  kIncompatibleSum = 7,
  kPlanarDegenerate = 8,
  kInvalidFrame = 9,
  kUnsupportedExponent = 10,
  kInvalidConfiguration = 11,
  kInvalidWitness = 12,
  kGradientUndefined = 13,
  kInvalidPeriod = 14,
  kEmptyConstraint = 15,
  kNearCollision = 16,
  kParse = 17,
  kIo = 18,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace equiorbit
