#pragma once

// Generalized Ait-Sahalia short-rate model
//
//   dX = (a_{-1} X^{-1} - a_0 + a_1 X - a_2 X^gamma) dt + b X^theta dW
//
// and its Lamperti image Y = X^(1-theta), which has additive noise:
//
//   dY = f(Y) dt + b(1-theta) dW,   f(y) = -lambda y + F(y),
//   lambda = (theta-1) a_1.
//
// All functions reject states <= 0: fractional powers of negative numbers are
// not defined and the schemes deal with negativity explicitly.

namespace aitsde {

struct ModelParams {
  double a_minus1 = 0.0;
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double b = 0.0;
  double gamma = 0.0;
  double theta = 0.0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

enum class Regime { NonCritical, Critical };

const char* to_string(Regime regime) noexcept;

struct LampertiConstants {
  double lambda;       // (theta-1) a_1 > 0
  double noise_coeff;  // b (1-theta) < 0
};

// Validated parameter set. Construction goes through `validate`, so every
// Model in circulation satisfies the positivity and exponent constraints and
// sits in a supported regime (gamma + 1 >= 2 theta).
class Model {
 public:
  static Model validate(const ModelParams& raw);

  const ModelParams& params() const noexcept { return p_; }
  Regime regime() const noexcept { return regime_; }
  LampertiConstants lamperti_constants() const noexcept { return {lambda_, noise_coeff_}; }
  double lambda() const noexcept { return lambda_; }
  double noise_coeff() const noexcept { return noise_coeff_; }

  // Exponents of the transformed drift terms.
  double exp_a2() const noexcept { return e_a2_; }    // (gamma-theta)/(1-theta)
  double exp_am1() const noexcept { return e_am1_; }  // (theta+1)/(theta-1)
  double exp_a0() const noexcept { return e_a0_; }    // theta/(theta-1)

 private:
  explicit Model(const ModelParams& p);

  ModelParams p_;
  Regime regime_ = Regime::NonCritical;
  double lambda_ = 0.0;
  double noise_coeff_ = 0.0;
  double e_a2_ = 0.0;
  double e_am1_ = 0.0;
  double e_a0_ = 0.0;
};

// Original coordinates.
double drift_x(const Model& m, double x);
double drift_x_prime(const Model& m, double x);
double diffusion_x(const Model& m, double x);
double diffusion_x_prime(const Model& m, double x);

// Y = X^(1-theta) and its inverse.
double lamperti(const Model& m, double x);
double lamperti_inv(const Model& m, double y);

// Transformed drift f, its nonlinear part F = f + lambda y and the analytic
// derivatives of F (term-by-term power rule).
double drift_y(const Model& m, double y);
double big_F(const Model& m, double y);
double big_F_prime(const Model& m, double y);
double big_F_second(const Model& m, double y);
double lambda(const Model& m) noexcept;

// F / (1 + tau F^2). Satisfies tau * tamed_F^2 <= 1 for every y, tau.
double tamed_F(const Model& m, double y, double tau);

// Moment-order conditions under which sup_t E|Y_t|^{-p} (negative) and
// sup_t E|Y_t|^{p} (positive) stay finite.
bool negative_moment_admissible(const Model& m, double moment_order);
bool positive_moment_admissible(const Model& m, double moment_order);

// Upper end of the admissible negative-moment window in the critical regime,
// (2 a_2 + b^2) / ((theta-1) b^2). Infinite in the non-critical regime.
double negative_moment_upper(const Model& m) noexcept;
double negative_moment_lower(const Model& m) noexcept;
double positive_moment_lower(const Model& m) noexcept;

}  // namespace aitsde
