#pragma once

#include <stdexcept>
#include <string>

namespace quadfree {

enum class ErrorCode {
  InvalidArgument,
  NonSymmetric,
  NoConvergence,
  NotSeparable,
  DegenerateQuadratic,
  EmptyS,
  ApexNotInterior,
  AllRaysRecession,
  DegenerateCone,
  SamplingExhausted,
  NotUnit,
  UndefinedGradient,
  PreconditionViolated,
  NotInStrictRegion,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-readable code. `value` holds an optional
/// numeric payload (the constraint value for NotSeparable).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double value = 0.0)
      : std::runtime_error(what), code_(code), value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_;
};

}  // namespace quadfree
