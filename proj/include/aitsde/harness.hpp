#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "aitsde/analysis.hpp"
#include "aitsde/config.hpp"
#include "aitsde/noise.hpp"
#include "aitsde/schemes.hpp"

namespace aitsde {

// Path ensembles run either through the OpenMP kernel or through the plain
// serial loop. Both visit paths with identical per-path work and reduce in
// path-index order, so their outputs are bit-identical.
enum class Execution { Parallel, Serial };

struct RunOptions {
  Execution execution = Execution::Parallel;
  int workers = 0;  // 0: OpenMP default
  bool progress = false;  // one stderr line per (scheme, tau)
};

// Validated, resolved form of an ExperimentConfig.
struct ExperimentPlan {
  Model model;
  GridSpec grid;                     // reference grid, step = reference.tau
  std::vector<std::size_t> factors;  // coarsening factor of each tau
};

ExperimentPlan plan_experiment(const ExperimentConfig& cfg);

struct ErrorRow {
  SchemeId scheme = SchemeId::TSM;
  double tau = 0.0;
  std::size_t n_paths = 0;
  double rms_error_x = 0.0;
  double rms_error_y = 0.0;
  double wall_time_s = 0.0;
  std::size_t backstop_count = 0;
  std::size_t negative_proposal_count = 0;
  double max_solver_residual = 0.0;
  std::size_t excluded_paths = 0;
};

struct SchemeRate {
  SchemeId scheme;
  RateFit fit;
};

struct ConvergenceResult {
  std::vector<ErrorRow> rows;
  std::vector<SchemeRate> rates;  // only for schemes with >= 3 positive errors
};

// Strong errors at time T against the reference scheme run on the same
// Brownian path. Parallel execution reports wall_time_s = 0.
ConvergenceResult run_convergence(const ExperimentConfig& cfg, const RunOptions& opts = {});

// As run_convergence, plus wall time per (scheme, tau) measured around the
// whole ensemble on a single worker.
ConvergenceResult run_efficiency(const ExperimentConfig& cfg, const RunOptions& opts = {});

struct PositivityRow {
  SchemeId scheme = SchemeId::TSM;
  double tau = 0.0;
  std::size_t n_paths = 0;
  std::size_t total_steps = 0;
  std::size_t negative_proposals = 0;
  std::size_t backstop_invocations = 0;
};

// Exact negativity/backstop counters. The noise grid is the finest tau of
// the config; the reference scheme is not run.
std::vector<PositivityRow> run_positivity_census(const ExperimentConfig& cfg,
                                                 const RunOptions& opts = {});

struct MomentRow {
  double t = 0.0;
  double order = 0.0;
  double mean_abs_y_pow = 0.0;
  double mean_abs_y_negpow = 0.0;
};

struct MomentResult {
  SchemeId scheme = SchemeId::TSM;
  double tau = 0.0;
  std::size_t n_paths = 0;
  std::vector<MomentRow> rows;        // grid-time major, then order
  std::vector<std::string> warnings;  // orders outside the admissible ranges
};

// Sample means of |Y_n|^q and |Y_n|^-q at every grid time, for the first
// scheme and first tau of the config.
MomentResult run_moment_tracking(const ExperimentConfig& cfg, std::span<const double> orders,
                                 const RunOptions& opts = {});

// Share of paths that may be excluded for solver failures before a run aborts.
inline constexpr double kMaxExclusionFraction = 0.01;

}  // namespace aitsde
