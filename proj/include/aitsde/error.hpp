#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aitsde {

enum class Errc {
  NonPositiveCoefficient,
  ExponentOutOfRange,
  UnsupportedRegime,
  NonPositiveState,
  FactorNotDivisor,
  InvalidGrid,
  FlowDomainExit,
  BackstopNoRoot,
  NoSignChange,
  MaxIterations,
  NoFeasibleTau,
  DegenerateDesign,
  ConfigInvalid,
  TooManyExclusions,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

// Every failure in the library is reported through this type; `code()` lets
// callers (the harness, the CLI) branch on the kind without parsing text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace aitsde
