#pragma once
// Reference computations used only by the tests. Kept independent of the
// library code paths they check.

#include <cmath>
#include <cstddef>
#include <functional>

#include "aitsde/model.hpp"

namespace oracle {

// Classical fourth-order Runge-Kutta for y' = f(y) over [0, t] with step at most h_max.
inline double rk4(const std::function<double(double)>& f, double y, double t, double h_max) {
  const auto n = static_cast<std::size_t>(std::ceil(t / h_max));
  const double h = t / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k1 = f(y);
    const double k2 = f(y + 0.5 * h * k1);
    const double k3 = f(y + 0.5 * h * k2);
    const double k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

// Pure bisection to the last representable bracket.
template <class Fn>
double bisect(const Fn& fn, double lo, double hi) {
  const bool increasing = fn(lo) < 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = fn(mid);
    if (v == 0.0) return mid;
    if ((v < 0.0) == increasing) lo = mid; else hi = mid;
  }
  return std::abs(fn(lo)) <= std::abs(fn(hi)) ? lo : hi;
}

// Right-hand sides of the four pieces of the Lamperti drift, written out
// directly from the transformed drift.
inline double rhs_u(const aitsde::ModelParams& p, double y) {
  return (p.theta - 1.0) * p.a2 * std::pow(y, (p.gamma - p.theta) / (1.0 - p.theta));
}
inline double rhs_v(const aitsde::ModelParams& p, double y) {
  return -(p.theta - 1.0) * p.a_minus1 * std::pow(y, (p.theta + 1.0) / (p.theta - 1.0));
}
inline double rhs_p(const aitsde::ModelParams& p, double y) {
  return (p.theta - 1.0) * p.a0 * std::pow(y, p.theta / (p.theta - 1.0));
}
inline double rhs_q(const aitsde::ModelParams& p, double y) {
  return (p.theta - 1.0) * 0.5 * p.b * p.b * p.theta / y;
}

// Full transformed drift f, from the same pieces.
inline double rhs_f(const aitsde::ModelParams& p, double y) {
  return rhs_u(p, y) + rhs_v(p, y) + rhs_p(p, y) + rhs_q(p, y) - (p.theta - 1.0) * p.a1 * y;
}

}  // namespace oracle
