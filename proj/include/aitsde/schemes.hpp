#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aitsde/model.hpp"

namespace aitsde {

// TSM, Splitting, BEM_Y and TEM_Y evolve the Lamperti coordinate Y;
// RefBEM_X and TamedMilstein_X evolve X directly.
enum class SchemeId { TSM, Splitting, BEM_Y, TEM_Y, RefBEM_X, TamedMilstein_X };

inline constexpr std::array<SchemeId, 6> kAllSchemes = {
    SchemeId::TSM,   SchemeId::Splitting, SchemeId::BEM_Y,
    SchemeId::TEM_Y, SchemeId::RefBEM_X,  SchemeId::TamedMilstein_X};

std::string_view to_string(SchemeId id) noexcept;
std::optional<SchemeId> scheme_from_string(std::string_view name) noexcept;
bool evolves_x(SchemeId id) noexcept;

struct StepOutcome {
  double value = 0.0;  // post-step state in the scheme's own coordinate, > 0
  bool backstop_used = false;
  bool explicit_proposal_negative = false;
  int solver_iterations = 0;
  double solver_residual = 0.0;
};

// One step of each scheme from `state` with Brownian increment `dw`.
StepOutcome step_tsm(const Model& m, double y, double dw, double tau);
StepOutcome step_splitting(const Model& m, double y, double dw, double tau);
StepOutcome step_bem_y(const Model& m, double y, double dw, double tau);
StepOutcome step_tem_y(const Model& m, double y, double dw, double tau);
StepOutcome step_refbem_x(const Model& m, double x, double dw, double tau);
StepOutcome step_tamed_milstein_x(const Model& m, double x, double dw, double tau);

StepOutcome step(SchemeId id, const Model& m, double state, double dw, double tau);

// Drift-implicit step in Y: positive root z of z - tau (F(z) - lambda z) = y + shift.
// Shared by BEM_Y and the positivity backstop of the explicit Y schemes.
StepOutcome implicit_y_step(const Model& m, double y, double shift, double tau);

// Exact flows of the four nonlinear drift pieces of F over time tau:
//   U: dU = (theta-1) a_2 U^((gamma-theta)/(1-theta)) dt
//   V: dV = (1-theta) a_{-1} V^((theta+1)/(theta-1)) dt
//   P: dP = (theta-1) a_0 P^(theta/(theta-1)) dt      (may blow up)
//   Q: dQ = (1/2) b^2 theta (theta-1) Q^(-1) dt
enum class SubflowKind { U, V, P, Q };

double subflow(const Model& m, SubflowKind kind, double y, double tau);

// The U -> V -> P -> Q composition written as a single nested expression.
// This is the corrected form of the composite; the printed version of it has
// sign and exponent slips that the sub-flow oracles rule out.
double splitting_closed_form(const Model& m, double y, double tau);

struct PathDiagnostics {
  std::size_t steps = 0;
  std::size_t backstops = 0;
  std::size_t negative_proposals = 0;
  std::size_t solver_iterations = 0;
  double max_solver_residual = 0.0;
  double min_state = 0.0;
  double max_state = 0.0;
};

struct PathResult {
  double terminal = 0.0;
  PathDiagnostics diagnostics;
};

// Folds the stepper over `increments`, starting from `initial` in the scheme's
// own coordinate. When `trajectory` is given it receives all increments.size()+1
// states (initial state included).
PathResult simulate_path(SchemeId id, const Model& m, double initial,
                         std::span<const double> increments, double tau,
                         std::vector<double>* trajectory = nullptr);

// Same path seen in X: Y schemes are started at lamperti(x0) and their terminal
// value mapped back with lamperti_inv; only the endpoints are transformed.
PathResult simulate_path_x(SchemeId id, const Model& m, double x0,
                           std::span<const double> increments, double tau);

}  // namespace aitsde
