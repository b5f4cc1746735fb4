#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "aitsde/error.hpp"

namespace aitsde {

struct RootResult {
  double root = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

inline constexpr int kMaxSolverIterations = 200;

// Scalar root-finding problem on a positive bracket [lo, hi] across which the
// residual changes sign. `derivative` is the analytic derivative of
// `residual`; `initial_guess` outside the bracket means "start at the middle".
template <class Residual, class Derivative>
struct ImplicitProblem {
  Residual residual;
  Derivative derivative;
  double lo = 0.0;
  double hi = 0.0;
  double tolerance = 1e-12;
  double initial_guess = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Geometric midpoint when the bracket spans orders of magnitude.
inline double bracket_midpoint(double lo, double hi) noexcept {
  if (lo > 0.0 && hi > 4.0 * lo) return std::sqrt(lo) * std::sqrt(hi);
  return lo + 0.5 * (hi - lo);
}

}  // namespace detail

// Safeguarded Newton: a Newton step is taken when it lands strictly inside
// the current bracket and at least halves the residual of the previous
// iterate; otherwise the bracket is bisected. Stops when |residual| <= tol.
template <class Residual, class Derivative>
RootResult solve_implicit(const ImplicitProblem<Residual, Derivative>& pb) {
  double lo = pb.lo;
  double hi = pb.hi;
  if (!(lo < hi)) throw Error(Errc::NoSignChange, "empty bracket");
  double r_lo = pb.residual(lo);
  double r_hi = pb.residual(hi);
  if (std::abs(r_lo) <= pb.tolerance) return {lo, 0, r_lo};
  if (std::abs(r_hi) <= pb.tolerance) return {hi, 0, r_hi};
  if (!(r_lo < 0.0 && r_hi > 0.0) && !(r_lo > 0.0 && r_hi < 0.0)) {
    throw Error(Errc::NoSignChange, "residual does not change sign on [" + std::to_string(lo) +
                                        ", " + std::to_string(hi) + "]");
  }
  const bool increasing = r_lo < 0.0;

  double z = pb.initial_guess;
  if (!(z > lo && z < hi)) z = detail::bracket_midpoint(lo, hi);
  double r_prev = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= kMaxSolverIterations; ++it) {
    const double r = pb.residual(z);
    if (std::abs(r) <= pb.tolerance) return {z, it, r};
    if ((r < 0.0) == increasing) {
      lo = z;
      r_lo = r;
    } else {
      hi = z;
      r_hi = r;
    }

    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      // No representable refinement left; accept only if an endpoint already
      // meets the tolerance.
      const bool lo_better = std::abs(r_lo) <= std::abs(r_hi);
      const double best = lo_better ? lo : hi;
      const double best_r = lo_better ? r_lo : r_hi;
      if (std::abs(best_r) <= pb.tolerance) return {best, it, best_r};
      throw Error(Errc::MaxIterations,
                  "bracket collapsed with residual " + std::to_string(best_r) + " above tolerance");
    }

    const double slope = pb.derivative(z);
    double next = z - r / slope;
    const bool newton_ok = std::isfinite(next) && next > lo && next < hi &&
                           std::abs(r) <= 0.5 * std::abs(r_prev);
    if (!newton_ok) next = detail::bracket_midpoint(lo, hi);
    r_prev = r;
    z = next;
  }
  throw Error(Errc::MaxIterations, "no convergence after " +
                                       std::to_string(kMaxSolverIterations) + " iterations");
}

}  // namespace aitsde
