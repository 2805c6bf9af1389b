#pragma once

#include <stdexcept>
#include <string>

namespace rdlab {

/// Failure categories shared by every module. Values are stable: the C API
/// returns them unchanged as status codes.
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  EmptyResult = 2,
  NumericalFailure = 3,
  Infeasible = 4,
  NoSignChange = 5,
  NoBand = 6,
  PoleAtMode = 7,
  DegenerateDomain = 8,
  DisconnectedDomain = 9,
  ShapeMismatch = 10,
  BlowUp = 11,
  EmptyRegion = 12,
  RegionNotRectangular = 13,
  NeverOnset = 14,
  Io = 15,
  Config = 16,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rdlab
