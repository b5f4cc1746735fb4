#pragma once

#include <cstdint>

namespace aitsde {

// Standard normal distribution function. Absolute error below 1e-15 on the
// whole line and relative accuracy in both tails; built only on exp.
//   |x| < 3 : Marsaglia's Taylor series  Phi(x) = 1/2 + phi(x) sum x^(2k+1)/(2k+1)!!
//   |x| >= 3: Mills-ratio continued fraction, evaluated with modified Lentz.
double normal_cdf(double x) noexcept;

// Upper tail 1 - Phi(x), accurate for large positive x.
double normal_ccdf(double x) noexcept;

double normal_pdf(double x) noexcept;

// Acklam's rational approximation to the normal quantile (relative error
// about 1.15e-9). Exposed so tests can check the raw approximation.
double normal_quantile_rational(double u) noexcept;

// Rational approximation followed by one Halley step against normal_cdf,
// which brings the error down to a few ulps.
double normal_quantile(double u) noexcept;

// SplitMix64 finaliser: bijective 64-bit avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace aitsde
