#include "aitsde/error.hpp"

namespace aitsde {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case Errc::ExponentOutOfRange: return "ExponentOutOfRange";
    case Errc::UnsupportedRegime: return "UnsupportedRegime";
    case Errc::NonPositiveState: return "NonPositiveState";
    case Errc::FactorNotDivisor: return "FactorNotDivisor";
    case Errc::InvalidGrid: return "InvalidGrid";
    case Errc::FlowDomainExit: return "FlowDomainExit";
    case Errc::BackstopNoRoot: return "BackstopNoRoot";
    case Errc::NoSignChange: return "NoSignChange";
    case Errc::MaxIterations: return "MaxIterations";
    case Errc::NoFeasibleTau: return "NoFeasibleTau";
    case Errc::DegenerateDesign: return "DegenerateDesign";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::TooManyExclusions: return "TooManyExclusions";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace aitsde
