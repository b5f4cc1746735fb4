#include "aitsde/schemes.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "aitsde/error.hpp"
#include "aitsde/solver.hpp"

namespace aitsde {

namespace {

constexpr double kImplicitTolerance = 1e-12;
constexpr int kMaxBracketDoublings = 60;

// Positive root of a residual that tends to -inf at 0+ and +inf at infinity.
template <class Residual, class Derivative>
RootResult positive_root(const Residual& residual, const Derivative& derivative, double state,
                         double shift) {
  double lo = 1e-12 * state;
  double hi = std::max(10.0 * state, state + 10.0 * std::abs(shift));
  for (int k = 0;; ++k) {
    const bool lo_ok = residual(lo) < 0.0;
    const bool hi_ok = residual(hi) > 0.0;
    if (lo_ok && hi_ok) break;
    if (k == kMaxBracketDoublings) {
      throw Error(Errc::BackstopNoRoot, "no sign change after " +
                                            std::to_string(kMaxBracketDoublings) + " doublings");
    }
    if (!lo_ok) lo *= 0.5;
    if (!hi_ok) hi *= 2.0;
  }
  try {
    return solve_implicit(ImplicitProblem{residual, derivative, lo, hi, kImplicitTolerance, state});
  } catch (const Error& e) {
    throw Error(Errc::BackstopNoRoot, e.what());
  }
}

void require_step_inputs(double state, double tau, const char* where) {
  if (!(state > 0.0)) {
    throw Error(Errc::NonPositiveState, std::string(where) + ": state must be positive");
  }
  if (!(tau > 0.0)) throw Error(Errc::InvalidGrid, std::string(where) + ": tau must be positive");
}

StepOutcome backstop(const Model& m, double y, double shift, double tau) {
  StepOutcome out = implicit_y_step(m, y, shift, tau);
  out.backstop_used = true;
  out.explicit_proposal_negative = true;
  return out;
}

}  // namespace

std::string_view to_string(SchemeId id) noexcept {
  switch (id) {
    case SchemeId::TSM: return "TSM";
    case SchemeId::Splitting: return "Splitting";
    case SchemeId::BEM_Y: return "BEM_Y";
    case SchemeId::TEM_Y: return "TEM_Y";
    case SchemeId::RefBEM_X: return "RefBEM_X";
    case SchemeId::TamedMilstein_X: return "TamedMilstein_X";
  }
  return "?";
}

std::optional<SchemeId> scheme_from_string(std::string_view name) noexcept {
  for (SchemeId id : kAllSchemes) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

bool evolves_x(SchemeId id) noexcept {
  return id == SchemeId::RefBEM_X || id == SchemeId::TamedMilstein_X;
}

StepOutcome implicit_y_step(const Model& m, double y, double shift, double tau) {
  require_step_inputs(y, tau, "implicit_y_step");
  const double lam = m.lambda();
  const double rhs = y + shift;
  auto residual = [&](double z) { return z - tau * (big_F(m, z) - lam * z) - rhs; };
  auto derivative = [&](double z) { return 1.0 - tau * (big_F_prime(m, z) - lam); };
  const RootResult r = positive_root(residual, derivative, y, shift);
  return StepOutcome{r.root, false, false, r.iterations, r.residual};
}

StepOutcome step_tsm(const Model& m, double y, double dw, double tau) {
  require_step_inputs(y, tau, "step_tsm");
  const double shift = m.noise_coeff() * dw;
  const double tf = tamed_F(m, y, tau);
  assert(tau * tf * tf <= 1.0);
  const double proposal = std::exp(-m.lambda() * tau) * (y + tau * tf + shift);
  if (proposal > 0.0) return StepOutcome{proposal};
  return backstop(m, y, shift, tau);
}

double subflow(const Model& m, SubflowKind kind, double y, double tau) {
  if (!(y > 0.0)) throw Error(Errc::NonPositiveState, "subflow requires a positive state");
  if (tau == 0.0) return y;
  const auto& p = m.params();
  const double th = p.theta;
  switch (kind) {
    case SubflowKind::U: {
      const double k = (p.gamma - 1.0) / (th - 1.0);
      return std::pow((p.gamma - 1.0) * p.a2 * tau + std::pow(y, k), 1.0 / k);
    }
    case SubflowKind::V: {
      const double k = -2.0 / (th - 1.0);
      return std::pow(2.0 * p.a_minus1 * tau + std::pow(y, k), 1.0 / k);
    }
    case SubflowKind::P: {
      const double base = std::pow(y, -1.0 / (th - 1.0)) - p.a0 * tau;
      if (!(base > 0.0)) {
        throw Error(Errc::FlowDomainExit, "P-flow leaves the positive domain within the step");
      }
      return std::pow(base, -(th - 1.0));
    }
    case SubflowKind::Q:
      return std::sqrt(p.b * p.b * th * (th - 1.0) * tau + y * y);
  }
  return y;
}

double splitting_closed_form(const Model& m, double y, double tau) {
  const auto& p = m.params();
  const double th = p.theta;
  const double g = p.gamma;
  const double a = (g - 1.0) * p.a2 * tau + std::pow(y, (g - 1.0) / (th - 1.0));
  const double b = std::pow(a, -2.0 / (g - 1.0)) + 2.0 * p.a_minus1 * tau;
  const double c = std::sqrt(b) - p.a0 * tau;
  if (!(c > 0.0)) throw Error(Errc::FlowDomainExit, "P-flow leaves the positive domain");
  return std::sqrt(p.b * p.b * th * (th - 1.0) * tau + std::pow(c, -2.0 * (th - 1.0)));
}

StepOutcome step_splitting(const Model& m, double y, double dw, double tau) {
  require_step_inputs(y, tau, "step_splitting");
  double v = subflow(m, SubflowKind::U, y, tau);
  v = subflow(m, SubflowKind::V, v, tau);
  v = subflow(m, SubflowKind::P, v, tau);
  v = subflow(m, SubflowKind::Q, v, tau);
  const double decay = std::exp(-m.lambda() * tau);
  const double shift = m.noise_coeff() * dw;
  const double result = decay * v + shift * decay;
  if (result > 0.0) return StepOutcome{result};
  return backstop(m, y, shift, tau);
}

StepOutcome step_bem_y(const Model& m, double y, double dw, double tau) {
  return implicit_y_step(m, y, m.noise_coeff() * dw, tau);
}

StepOutcome step_tem_y(const Model& m, double y, double dw, double tau) {
  require_step_inputs(y, tau, "step_tem_y");
  const double f = drift_y(m, y);
  const double shift = m.noise_coeff() * dw;
  const double proposal = y + tau * f / (1.0 + tau * std::abs(f)) + shift;
  if (proposal > 0.0) return StepOutcome{proposal};
  return backstop(m, y, shift, tau);
}

StepOutcome step_refbem_x(const Model& m, double x, double dw, double tau) {
  require_step_inputs(x, tau, "step_refbem_x");
  const double shift = diffusion_x(m, x) * dw;
  const double rhs = x + shift;
  auto residual = [&](double z) { return z - tau * drift_x(m, z) - rhs; };
  auto derivative = [&](double z) { return 1.0 - tau * drift_x_prime(m, z); };
  const RootResult r = positive_root(residual, derivative, x, shift);
  return StepOutcome{r.root, false, false, r.iterations, r.residual};
}

StepOutcome step_tamed_milstein_x(const Model& m, double x, double dw, double tau) {
  require_step_inputs(x, tau, "step_tamed_milstein_x");
  const double mu = drift_x(m, x);
  const double sigma = diffusion_x(m, x);
  const double sigma_prime = m.params().theta * sigma / x;
  const double proposal = x + tau * mu / (1.0 + tau * std::abs(mu)) + sigma * dw +
                          0.5 * sigma * sigma_prime * (dw * dw - tau);
  if (proposal > 0.0) return StepOutcome{proposal};
  StepOutcome out = step_refbem_x(m, x, dw, tau);
  out.backstop_used = true;
  out.explicit_proposal_negative = true;
  return out;
}

StepOutcome step(SchemeId id, const Model& m, double state, double dw, double tau) {
  switch (id) {
    case SchemeId::TSM: return step_tsm(m, state, dw, tau);
    case SchemeId::Splitting: return step_splitting(m, state, dw, tau);
    case SchemeId::BEM_Y: return step_bem_y(m, state, dw, tau);
    case SchemeId::TEM_Y: return step_tem_y(m, state, dw, tau);
    case SchemeId::RefBEM_X: return step_refbem_x(m, state, dw, tau);
    case SchemeId::TamedMilstein_X: return step_tamed_milstein_x(m, state, dw, tau);
  }
  throw Error(Errc::ConfigInvalid, "unknown scheme");
}

PathResult simulate_path(SchemeId id, const Model& m, double initial,
                         std::span<const double> increments, double tau,
                         std::vector<double>* trajectory) {
  if (!(initial > 0.0)) throw Error(Errc::NonPositiveState, "initial state must be positive");
  PathResult res;
  auto& d = res.diagnostics;
  d.min_state = d.max_state = initial;
  if (trajectory) {
    trajectory->clear();
    trajectory->reserve(increments.size() + 1);
    trajectory->push_back(initial);
  }
  double state = initial;
  for (double dw : increments) {
    const StepOutcome s = step(id, m, state, dw, tau);
    state = s.value;
    ++d.steps;
    d.backstops += s.backstop_used ? 1 : 0;
    d.negative_proposals += s.explicit_proposal_negative ? 1 : 0;
    d.solver_iterations += static_cast<std::size_t>(s.solver_iterations);
    d.max_solver_residual = std::max(d.max_solver_residual, std::abs(s.solver_residual));
    d.min_state = std::min(d.min_state, state);
    d.max_state = std::max(d.max_state, state);
    if (trajectory) trajectory->push_back(state);
  }
  res.terminal = state;
  return res;
}

PathResult simulate_path_x(SchemeId id, const Model& m, double x0,
                           std::span<const double> increments, double tau) {
  if (evolves_x(id)) return simulate_path(id, m, x0, increments, tau);
  PathResult r = simulate_path(id, m, lamperti(m, x0), increments, tau);
  r.terminal = lamperti_inv(m, r.terminal);
  return r;
}

}  // namespace aitsde
