#pragma once

#include <stdexcept>
#include <string>

namespace pgakit {

enum class ErrorCode {
  NonConvergence,
  NotPositiveDefinite,
  CutLocus,
  BaseMismatch,
  OutOfInjectivityRadius,
  DegeneratePlane,
  UnsupportedManifold,
  IndexOutOfRange,
  DegenerateSpectrum,
  LogDomain,
  SeriesExtractionUnstable,
  UnsupportedOrder,
  InsufficientGrid,
  Validation,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace pgakit
