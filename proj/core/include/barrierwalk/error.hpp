#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace barrierwalk {

enum class Errc {
  NonStandardized,
  InvalidMass,
  NegativeProb,
  NonIntegerPowerForAlpha,
  SizeOverflow,
  OffLattice,
  ParityMismatch,
  InvalidCounts,
  NegativeW,
  NegativeArgument,
  PreconditionViolated,
  NoAcceptedSamples,
  ExcessCensoring,
  InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

// All library failures are reported as Error; code() identifies the contract
// that was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace barrierwalk
