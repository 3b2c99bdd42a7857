#include "pgakit/errors.hpp"

namespace pgakit {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::CutLocus: return "CutLocus";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::OutOfInjectivityRadius: return "OutOfInjectivityRadius";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::UnsupportedManifold: return "UnsupportedManifold";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::LogDomain: return "LogDomain";
    case ErrorCode::SeriesExtractionUnstable: return "SeriesExtractionUnstable";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::InsufficientGrid: return "InsufficientGrid";
    case ErrorCode::Validation: return "Validation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace pgakit
