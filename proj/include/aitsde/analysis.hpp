#pragma once

#include <cstddef>
#include <span>

#include "aitsde/model.hpp"
#include "aitsde/special.hpp"

namespace aitsde {

// Probability that the explicit TSM proposal from y is negative:
//   1 - Phi((y + tau F_tau(y)) / (b (theta-1) sqrt(tau))).
double one_step_negativity_prob(const Model& m, double y, double tau);

// The argument in its originally printed shape, (y + F_tau(y)) / (b (theta-1) sqrt(tau)),
// without the factor tau on the drift. Kept for comparison only; the
// probability above is the one that matches the scheme.
double literal_negativity_argument(const Model& m, double y, double tau);

// Inputs of the whole-horizon positivity bound. [m1, m2] brackets every state
// of the numerical solution; epsilon is the admissible failure probability.
struct PositivityBoundInputs {
  Model model;
  double m1 = 0.0;
  double m2 = 0.0;
  double epsilon = 0.0;
  double horizon = 1.0;

  void validate() const;
};

// Worst-case normalised margin of the explicit proposal over states in
// [m1, m2] (the current state itself is bounded below by m1).
double proposal_margin_bound(const PositivityBoundInputs& in, double tau);

// Phi(margin / (b (theta-1)))^n_steps; equals 1 for n_steps == 0.
double survival_lower_bound(const PositivityBoundInputs& in, double tau, std::size_t n_steps);

// g(tau) = margin(tau) - sqrt(-2 b^2 (theta-1)^2 ln(1 - (2 (1-eps)^(tau/T) - 1)^2)).
// Returns -inf where the logarithm is undefined.
double confidence_gap(const PositivityBoundInputs& in, double tau);

// Largest tau in (0, 1) with g(tau) >= 0, to relative 1e-10.
double tau_for_confidence(const PositivityBoundInputs& in);

struct RatePoint {
  double tau;
  double error;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares of log2(error) on log2(tau).
RateFit fit_rate(std::span<const RatePoint> points);

}  // namespace aitsde
