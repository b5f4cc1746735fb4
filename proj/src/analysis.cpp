#include "aitsde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aitsde/error.hpp"

namespace aitsde {

double one_step_negativity_prob(const Model& m, double y, double tau) {
  const auto& p = m.params();
  const double arg = (y + tau * tamed_F(m, y, tau)) / (p.b * (p.theta - 1.0) * std::sqrt(tau));
  return normal_ccdf(arg);
}

double literal_negativity_argument(const Model& m, double y, double tau) {
  const auto& p = m.params();
  return (y + tamed_F(m, y, tau)) / (p.b * (p.theta - 1.0) * std::sqrt(tau));
}

void PositivityBoundInputs::validate() const {
  if (!(m1 > 0.0) || !(m1 <= m2)) {
    throw Error(Errc::ConfigInvalid, "state bounds must satisfy 0 < m1 <= m2");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(Errc::ConfigInvalid, "epsilon must lie in (0, 1)");
  if (!(horizon > 0.0)) throw Error(Errc::ConfigInvalid, "horizon must be positive");
}

double proposal_margin_bound(const PositivityBoundInputs& in, double tau) {
  const auto& p = in.model.params();
  const double th = p.theta;
  const double g = p.gamma;
  const double m1 = in.m1;
  const double m2 = in.m2;

  const double numerator =
      (th - 1.0) * std::sqrt(tau) *
      (p.a2 * std::pow(m2, (g - th) / (1.0 - th)) - p.a_minus1 * std::pow(m2, (th + 1.0) / (th - 1.0)) +
       p.a0 * std::pow(m1, th / (th - 1.0)) + 0.5 * p.b * p.b * th / m2);
  // b^4 term carries a single factor of theta.
  const double squares = p.a2 * p.a2 * std::pow(m1, (2.0 * g - 2.0 * th) / (1.0 - th)) +
                         p.a_minus1 * p.a_minus1 * std::pow(m2, (2.0 * th + 2.0) / (th - 1.0)) +
                         p.a0 * p.a0 * std::pow(m2, 2.0 * th / (th - 1.0)) +
                         0.25 * p.b * p.b * p.b * p.b * th / (m1 * m1);
  const double denominator = 1.0 + 4.0 * tau * (th - 1.0) * (th - 1.0) * squares;
  return m1 / std::sqrt(tau) + numerator / denominator;
}

double survival_lower_bound(const PositivityBoundInputs& in, double tau, std::size_t n_steps) {
  if (n_steps == 0) return 1.0;
  const auto& p = in.model.params();
  const double per_step = normal_cdf(proposal_margin_bound(in, tau) / (p.b * (p.theta - 1.0)));
  return std::pow(per_step, static_cast<double>(n_steps));
}

double confidence_gap(const PositivityBoundInputs& in, double tau) {
  const auto& p = in.model.params();
  // c = 2 (1-eps)^(tau/T) - 1 = 1 + 2 e with e = expm1((tau/T) log(1-eps)),
  // so 1 - c^2 = (-2e)(2 + 2e) without cancellation.
  const double e = std::expm1(tau / in.horizon * std::log1p(-in.epsilon));
  const double one_minus_c2 = (-2.0 * e) * (2.0 + 2.0 * e);
  if (!(one_minus_c2 > 0.0) || !(one_minus_c2 <= 1.0)) {
    return -std::numeric_limits<double>::infinity();
  }
  const double k = p.b * (p.theta - 1.0);
  const double threshold = std::sqrt(-2.0 * k * k * std::log(one_minus_c2));
  return proposal_margin_bound(in, tau) - threshold;
}

double tau_for_confidence(const PositivityBoundInputs& in) {
  in.validate();
  const double top = std::nextafter(1.0, 0.0);
  if (confidence_gap(in, top) >= 0.0) return top;

  // Walk down a log grid on [1e-12, 1) to the first feasible point, then
  // bisect between it and its infeasible neighbour above.
  constexpr int kGrid = 4000;
  constexpr double kLowest = 1e-12;
  const double ratio = std::pow(kLowest, 1.0 / kGrid);
  double infeasible = top;
  double feasible = 0.0;
  double t = top;
  for (int k = 1; k <= kGrid; ++k) {
    t *= ratio;
    if (confidence_gap(in, t) >= 0.0) {
      feasible = t;
      break;
    }
    infeasible = t;
  }
  if (feasible == 0.0) {
    throw Error(Errc::NoFeasibleTau, "g(tau) < 0 on the whole range [1e-12, 1)");
  }
  while (infeasible - feasible > 1e-10 * feasible) {
    const double mid = 0.5 * (feasible + infeasible);
    if (confidence_gap(in, mid) >= 0.0) {
      feasible = mid;
    } else {
      infeasible = mid;
    }
  }
  return feasible;
}

RateFit fit_rate(std::span<const RatePoint> points) {
  if (points.size() < 3) {
    throw Error(Errc::DegenerateDesign, "need at least three points, got " + std::to_string(points.size()));
  }
  const double n = static_cast<double>(points.size());
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& pt : points) {
    if (!(pt.tau > 0.0) || !(pt.error > 0.0)) {
      throw Error(Errc::DegenerateDesign, "step sizes and errors must be positive");
    }
    sx += std::log2(pt.tau);
    sy += std::log2(pt.error);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& pt : points) {
    const double dx = std::log2(pt.tau) - mx;
    const double dy = std::log2(pt.error) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw Error(Errc::DegenerateDesign, "all step sizes are equal");

  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (const auto& pt : points) {
    const double r = std::log2(pt.error) - (fit.intercept + fit.slope * std::log2(pt.tau));
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

}  // namespace aitsde
