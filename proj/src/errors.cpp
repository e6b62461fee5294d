#include "brl/errors.hpp"

namespace brl {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InadmissibleParameters: return "InadmissibleParameters";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::UnclassifiableTrajectory: return "UnclassifiableTrajectory";
    case ErrorKind::NotAboveCritical: return "NotAboveCritical";
    case ErrorKind::InvalidTrajectory: return "InvalidTrajectory";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) {
  return kind == ErrorKind::InadmissibleParameters ||
         kind == ErrorKind::DomainError || kind == ErrorKind::InvalidConfig;
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace brl
