#include "barrierwalk/error.hpp"

namespace barrierwalk {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonStandardized: return "NonStandardized";
    case Errc::InvalidMass: return "InvalidMass";
    case Errc::NegativeProb: return "NegativeProb";
    case Errc::NonIntegerPowerForAlpha: return "NonIntegerPowerForAlpha";
    case Errc::SizeOverflow: return "SizeOverflow";
    case Errc::OffLattice: return "OffLattice";
    case Errc::ParityMismatch: return "ParityMismatch";
    case Errc::InvalidCounts: return "InvalidCounts";
    case Errc::NegativeW: return "NegativeW";
    case Errc::NegativeArgument: return "NegativeArgument";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::NoAcceptedSamples: return "NoAcceptedSamples";
    case Errc::ExcessCensoring: return "ExcessCensoring";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace barrierwalk
