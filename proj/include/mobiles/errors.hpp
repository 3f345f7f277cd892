#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mobiles {

enum class ErrorCode {
  not_involution,
  not_connected,
  non_planar,
  not_eulerian,
  connectivity_violated,
  not_bivalent,
  degenerate_map,
  not_well_labeled,
  ratchet_violated,
  non_invertible,
  not_contractive,
  no_convergence,
  window_exceeded,
  non_divisible,
  cap_exceeded,
  order_too_low,
  unequal_leaves,
  tolerance_not_met,
  invalid_input,
  internal,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_involution: return "NotInvolution";
    case ErrorCode::not_connected: return "NotConnected";
    case ErrorCode::non_planar: return "NonPlanar";
    case ErrorCode::not_eulerian: return "NotEulerian";
    case ErrorCode::connectivity_violated: return "ConnectivityViolated";
    case ErrorCode::not_bivalent: return "NotBivalent";
    case ErrorCode::degenerate_map: return "DegenerateMap";
    case ErrorCode::not_well_labeled: return "NotWellLabeled";
    case ErrorCode::ratchet_violated: return "RatchetViolated";
    case ErrorCode::non_invertible: return "NonInvertible";
    case ErrorCode::not_contractive: return "NotContractive";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::window_exceeded: return "WindowExceeded";
    case ErrorCode::non_divisible: return "NonDivisible";
    case ErrorCode::cap_exceeded: return "CapExceeded";
    case ErrorCode::order_too_low: return "OrderTooLow";
    case ErrorCode::unequal_leaves: return "UnequalLeaves";
    case ErrorCode::tolerance_not_met: return "ToleranceNotMet";
    case ErrorCode::invalid_input: return "InvalidInput";
    case ErrorCode::internal: return "Internal";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace mobiles
