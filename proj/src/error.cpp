#include "rdlab/error.hpp"

namespace rdlab {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NoBand: return "NoBand";
    case ErrorCode::PoleAtMode: return "PoleAtMode";
    case ErrorCode::DegenerateDomain: return "DegenerateDomain";
    case ErrorCode::DisconnectedDomain: return "DisconnectedDomain";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::RegionNotRectangular: return "RegionNotRectangular";
    case ErrorCode::NeverOnset: return "NeverOnset";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace rdlab
