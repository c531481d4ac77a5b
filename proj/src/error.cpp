#include "rcw/error.hpp"

namespace rcw {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::InconsistentDegrees: return "InconsistentDegrees";
    case ErrorCode::DisconnectedRing: return "DisconnectedRing";
    case ErrorCode::RoundLimitExceeded: return "RoundLimitExceeded";
    case ErrorCode::DegenerateNetwork: return "DegenerateNetwork";
    case ErrorCode::MassExhausted: return "MassExhausted";
    case ErrorCode::NotOutwardNeighbor: return "NotOutwardNeighbor";
    case ErrorCode::InfeasibleStay: return "InfeasibleStay";
    case ErrorCode::NotUniformlyConnected: return "NotUniformlyConnected";
    case ErrorCode::AapFailure: return "AapFailure";
    case ErrorCode::CyclicHopGraph: return "CyclicHopGraph";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rcw
