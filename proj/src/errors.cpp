#include "quadfree/errors.hpp"

namespace quadfree {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotSeparable: return "NotSeparable";
    case ErrorCode::DegenerateQuadratic: return "DegenerateQuadratic";
    case ErrorCode::EmptyS: return "EmptyS";
    case ErrorCode::ApexNotInterior: return "ApexNotInterior";
    case ErrorCode::AllRaysRecession: return "AllRaysRecession";
    case ErrorCode::DegenerateCone: return "DegenerateCone";
    case ErrorCode::SamplingExhausted: return "SamplingExhausted";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::UndefinedGradient: return "UndefinedGradient";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotInStrictRegion: return "NotInStrictRegion";
  }
  return "Unknown";
}

}  // namespace quadfree
