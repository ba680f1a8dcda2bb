#pragma once

#include <stdexcept>
#include <string>

namespace valsize {

enum class ErrorCode {
  InvalidArgument,      // violated numeric precondition
  UndefinedMeasure,     // zero denominator for a requested measure
  InconsistentTargets,  // F1 precision/recall targets exceed the F1 target
  Degenerate,           // information matrix or prevalence degenerate
  Config,               // malformed scenario configuration
  Simulation,           // simulation produced no usable repetitions
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Throws InvalidArgument with `what` unless `condition` holds.
inline void require(bool condition, const std::string& what) {
  if (!condition) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace valsize
