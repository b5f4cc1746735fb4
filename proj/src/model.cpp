#include "aitsde/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aitsde/error.hpp"

namespace aitsde {

namespace {

constexpr double kRegimeRelTol = 1e-12;

inline void require_positive_state(double v, const char* where) {
  if (!(v > 0.0)) {
    throw Error(Errc::NonPositiveState, std::string(where) + " requires a positive state, got " +
                                            std::to_string(v));
  }
}

}  // namespace

const char* to_string(Regime regime) noexcept {
  return regime == Regime::Critical ? "Critical" : "NonCritical";
}

Model::Model(const ModelParams& p) : p_(p) {
  const double th = p.theta;
  lambda_ = (th - 1.0) * p.a1;
  noise_coeff_ = p.b * (1.0 - th);
  e_a2_ = (p.gamma - th) / (1.0 - th);
  e_am1_ = (th + 1.0) / (th - 1.0);
  e_a0_ = th / (th - 1.0);
}

Model Model::validate(const ModelParams& raw) {
  const double coeffs[] = {raw.a_minus1, raw.a0, raw.a1, raw.a2, raw.b};
  for (double c : coeffs) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error(Errc::NonPositiveCoefficient,
                  "a_minus1, a0, a1, a2 and b must be positive and finite");
    }
  }
  if (!(raw.gamma > 1.0) || !(raw.theta > 1.0) || !std::isfinite(raw.gamma) ||
      !std::isfinite(raw.theta)) {
    throw Error(Errc::ExponentOutOfRange, "gamma and theta must both exceed 1");
  }
  const double lhs = raw.gamma + 1.0;
  const double rhs = 2.0 * raw.theta;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));

  Model m(raw);
  if (std::abs(lhs - rhs) <= kRegimeRelTol * scale) {
    m.regime_ = Regime::Critical;
  } else if (lhs > rhs) {
    m.regime_ = Regime::NonCritical;
  } else {
    throw Error(Errc::UnsupportedRegime, "gamma + 1 < 2 theta is not supported");
  }
  return m;
}

double drift_x(const Model& m, double x) {
  require_positive_state(x, "drift_x");
  const auto& p = m.params();
  return p.a_minus1 / x - p.a0 + p.a1 * x - p.a2 * std::pow(x, p.gamma);
}

double drift_x_prime(const Model& m, double x) {
  require_positive_state(x, "drift_x_prime");
  const auto& p = m.params();
  return -p.a_minus1 / (x * x) + p.a1 - p.gamma * p.a2 * std::pow(x, p.gamma - 1.0);
}

double diffusion_x(const Model& m, double x) {
  require_positive_state(x, "diffusion_x");
  const auto& p = m.params();
  return p.b * std::pow(x, p.theta);
}

double diffusion_x_prime(const Model& m, double x) {
  require_positive_state(x, "diffusion_x_prime");
  const auto& p = m.params();
  return p.b * p.theta * std::pow(x, p.theta - 1.0);
}

double lamperti(const Model& m, double x) {
  require_positive_state(x, "lamperti");
  return std::pow(x, 1.0 - m.params().theta);
}

double lamperti_inv(const Model& m, double y) {
  require_positive_state(y, "lamperti_inv");
  return std::pow(y, 1.0 / (1.0 - m.params().theta));
}

double big_F(const Model& m, double y) {
  require_positive_state(y, "big_F");
  const auto& p = m.params();
  const double bracket = p.a2 * std::pow(y, m.exp_a2()) - p.a_minus1 * std::pow(y, m.exp_am1()) +
                         p.a0 * std::pow(y, m.exp_a0()) + 0.5 * p.b * p.b * p.theta / y;
  return (p.theta - 1.0) * bracket;
}

double drift_y(const Model& m, double y) {
  require_positive_state(y, "drift_y");
  const auto& p = m.params();
  const double bracket = p.a2 * std::pow(y, m.exp_a2()) - p.a1 * y -
                         p.a_minus1 * std::pow(y, m.exp_am1()) + p.a0 * std::pow(y, m.exp_a0()) +
                         0.5 * p.b * p.b * p.theta / y;
  return (p.theta - 1.0) * bracket;
}

double big_F_prime(const Model& m, double y) {
  require_positive_state(y, "big_F_prime");
  const auto& p = m.params();
  const double eu = m.exp_a2();
  const double ev = m.exp_am1();
  const double ep = m.exp_a0();
  const double bracket = p.a2 * eu * std::pow(y, eu - 1.0) -
                         p.a_minus1 * ev * std::pow(y, ev - 1.0) +
                         p.a0 * ep * std::pow(y, ep - 1.0) - 0.5 * p.b * p.b * p.theta / (y * y);
  return (p.theta - 1.0) * bracket;
}

double big_F_second(const Model& m, double y) {
  require_positive_state(y, "big_F_second");
  const auto& p = m.params();
  const double eu = m.exp_a2();
  const double ev = m.exp_am1();
  const double ep = m.exp_a0();
  const double bracket = p.a2 * eu * (eu - 1.0) * std::pow(y, eu - 2.0) -
                         p.a_minus1 * ev * (ev - 1.0) * std::pow(y, ev - 2.0) +
                         p.a0 * ep * (ep - 1.0) * std::pow(y, ep - 2.0) +
                         p.b * p.b * p.theta / (y * y * y);
  return (p.theta - 1.0) * bracket;
}

double lambda(const Model& m) noexcept { return m.lambda(); }

double tamed_F(const Model& m, double y, double tau) {
  const double f = big_F(m, y);
  // f*f may overflow for y near 0; the quotient then correctly tends to 0.
  return f / (1.0 + tau * f * f);
}

double negative_moment_lower(const Model& m) noexcept { return 2.0 / (m.params().theta - 1.0); }

double negative_moment_upper(const Model& m) noexcept {
  if (m.regime() == Regime::NonCritical) return std::numeric_limits<double>::infinity();
  const auto& p = m.params();
  return (2.0 * p.a2 + p.b * p.b) / ((p.theta - 1.0) * p.b * p.b);
}

double positive_moment_lower(const Model& m) noexcept {
  const auto& p = m.params();
  return (p.gamma - 1.0) / (p.theta - 1.0);
}

bool negative_moment_admissible(const Model& m, double moment_order) {
  return moment_order >= negative_moment_lower(m) && moment_order <= negative_moment_upper(m);
}

bool positive_moment_admissible(const Model& m, double moment_order) {
  return moment_order >= positive_moment_lower(m);
}

}  // namespace aitsde
