#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rcw {

using NodeId = std::uint32_t;

// Values are stable: they are exported through the C API as status codes.
enum class ErrorCode : int {
  InvalidArgument = 1,
  NotConnected = 2,
  InconsistentDegrees = 3,
  DisconnectedRing = 4,
  RoundLimitExceeded = 5,
  DegenerateNetwork = 6,
  MassExhausted = 7,
  NotOutwardNeighbor = 8,
  InfeasibleStay = 9,
  NotUniformlyConnected = 10,
  AapFailure = 11,
  CyclicHopGraph = 12,
  InvalidDistribution = 13,
  ParseError = 14,
  IoError = 15,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when the attachment-point protocol leaves nodes with unconnected points.
class AapFailure : public Error {
 public:
  AapFailure(std::vector<NodeId> failed, const std::string& message)
      : Error(ErrorCode::AapFailure, message), failed_(std::move(failed)) {}

  const std::vector<NodeId>& failed_nodes() const noexcept { return failed_; }

 private:
  std::vector<NodeId> failed_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace rcw
