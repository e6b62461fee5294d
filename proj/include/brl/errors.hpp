#pragma once

#include <stdexcept>
#include <string>

namespace brl {

enum class ErrorKind {
  InadmissibleParameters,
  DomainError,
  InvalidConfig,
  Overflow,
  NumericalFailure,
  BracketFailure,
  UnclassifiableTrajectory,
  NotAboveCritical,
  InvalidTrajectory,
  InsufficientSamples,
  DegenerateFit,
};

const char* to_string(ErrorKind kind);

// True for errors caused by bad user input (as opposed to numerical trouble).
bool is_input_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace brl
