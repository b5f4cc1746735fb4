#include "aitsde/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>

#include "aitsde/error.hpp"

namespace aitsde {

namespace {

// Runs fn(i) for every path index. In parallel mode the first exception
// escaping any path is rethrown after the loop.
template <class Fn>
void for_each_path(std::size_t n, const RunOptions& opts, Fn&& fn) {
  if (opts.execution == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first;
  const long count = static_cast<long>(n);
  const int threads = opts.workers > 0 ? opts.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(aitsde_path_error)
      {
        if (!first) first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t dyadic_factor(double coarse, double fine) {
  const double ratio = coarse / fine;
  const double f = std::round(ratio);
  if (f < 1.0 || std::abs(ratio - f) > 1e-9 * f || !is_power_of_two(static_cast<std::size_t>(f))) {
    throw Error(Errc::ConfigInvalid, "tau " + std::to_string(coarse) +
                                         " is not a power-of-two multiple of " + std::to_string(fine));
  }
  return static_cast<std::size_t>(f);
}

struct Sample {
  double x = 0.0;
  double y = 0.0;
  PathDiagnostics diag;
  bool ok = false;
};

struct PathRecord {
  bool ref_ok = false;
  double x_ref = 0.0;
  double y_ref = 0.0;
  std::vector<Sample> samples;  // index = scheme * n_taus + tau
};

Sample run_sample(SchemeId id, const Model& m, double x0, std::span<const double> dw, double tau) {
  Sample s;
  try {
    const PathResult r = simulate_path_x(id, m, x0, dw, tau);
    s.x = r.terminal;
    s.y = lamperti(m, r.terminal);
    s.diag = r.diagnostics;
    s.ok = true;
  } catch (const Error&) {
    s.ok = false;
  }
  return s;
}

// Fills the fine increments of `path` and runs the reference on them.
void run_reference(const ExperimentConfig& cfg, const ExperimentPlan& plan, std::size_t path,
                   std::vector<double>& fine, PathRecord& rec) {
  fine.resize(plan.grid.n_fine);
  fill_increments(cfg.master_seed, path, plan.grid, fine);
  try {
    rec.x_ref = simulate_path_x(cfg.reference.scheme, plan.model, cfg.x0, fine, cfg.reference.tau).terminal;
    rec.y_ref = lamperti(plan.model, rec.x_ref);
    rec.ref_ok = true;
  } catch (const Error&) {
    rec.ref_ok = false;
  }
}

void check_exclusions(SchemeId id, std::size_t excluded, std::size_t n) {
  if (static_cast<double>(excluded) > kMaxExclusionFraction * static_cast<double>(n)) {
    throw Error(Errc::TooManyExclusions,
                std::string(to_string(id)) + ": " + std::to_string(excluded) + " of " +
                    std::to_string(n) + " paths failed");
  }
}

void report_progress(const RunOptions& opts, const ErrorRow& row) {
  if (!opts.progress) return;
  std::fprintf(stderr, "%s tau=%.6g paths=%zu rms_x=%.6e\n", std::string(to_string(row.scheme)).c_str(),
               row.tau, row.n_paths, row.rms_error_x);
}

// Reduces path records in path-index order into rows and rate fits.
// `timings` is either empty or holds one wall time per (scheme, tau).
ConvergenceResult reduce_errors(const ExperimentConfig& cfg, const std::vector<PathRecord>& records,
                                const std::vector<double>& timings, const RunOptions& opts) {
  const std::size_t n_taus = cfg.taus.size();
  const std::size_t n = records.size();
  ConvergenceResult out;
  for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
    std::vector<char> included(n, 0);
    std::size_t excluded = 0;
    for (std::size_t p = 0; p < n; ++p) {
      bool ok = records[p].ref_ok;
      for (std::size_t k = 0; ok && k < n_taus; ++k) ok = records[p].samples[s * n_taus + k].ok;
      included[p] = ok ? 1 : 0;
      excluded += ok ? 0 : 1;
    }
    check_exclusions(cfg.schemes[s], excluded, n);

    std::vector<RatePoint> points;
    for (std::size_t k = 0; k < n_taus; ++k) {
      ErrorRow row;
      row.scheme = cfg.schemes[s];
      row.tau = cfg.taus[k];
      row.excluded_paths = excluded;
      double sx = 0.0;
      double sy = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        if (!included[p]) continue;
        const PathRecord& rec = records[p];
        const Sample& smp = rec.samples[s * n_taus + k];
        const double ex = smp.x - rec.x_ref;
        const double ey = smp.y - rec.y_ref;
        sx += ex * ex;
        sy += ey * ey;
        ++row.n_paths;
        row.backstop_count += smp.diag.backstops;
        row.negative_proposal_count += smp.diag.negative_proposals;
        row.max_solver_residual = std::max(row.max_solver_residual, smp.diag.max_solver_residual);
      }
      const double denom = static_cast<double>(row.n_paths);
      row.rms_error_x = std::sqrt(sx / denom);
      row.rms_error_y = std::sqrt(sy / denom);
      row.wall_time_s = timings.empty() ? 0.0 : timings[s * n_taus + k];
      points.push_back({row.tau, row.rms_error_x});
      report_progress(opts, row);
      out.rows.push_back(row);
    }
    const bool fittable = points.size() >= 3 &&
                          std::all_of(points.begin(), points.end(), [](const RatePoint& pt) {
                            return pt.error > 0.0;
                          });
    if (fittable) out.rates.push_back({cfg.schemes[s], fit_rate(points)});
  }
  return out;
}

}  // namespace

ExperimentPlan plan_experiment(const ExperimentConfig& cfg) {
  auto invalid = [](const std::string& msg) { return Error(Errc::ConfigInvalid, msg); };
  Model model = [&] {
    try {
      return Model::validate(cfg.model);
    } catch (const Error& e) {
      throw invalid(e.what());
    }
  }();
  if (!(cfg.x0 > 0.0)) throw invalid("x0 must be positive");
  if (!(cfg.horizon > 0.0)) throw invalid("horizon must be positive");
  if (cfg.n_paths == 0) throw invalid("n_paths must be positive");
  if (cfg.taus.empty()) throw invalid("taus must not be empty");
  if (cfg.schemes.empty()) throw invalid("schemes must not be empty");
  if (!(cfg.reference.tau > 0.0)) throw invalid("reference tau must be positive");

  GridSpec grid = [&] {
    try {
      return GridSpec::from_step(cfg.horizon, cfg.reference.tau);
    } catch (const Error& e) {
      throw invalid(e.what());
    }
  }();
  std::vector<std::size_t> factors;
  for (double tau : cfg.taus) {
    if (!(tau > 0.0)) throw invalid("every tau must be positive");
    const std::size_t f = dyadic_factor(tau, cfg.reference.tau);
    if (grid.n_fine % f != 0) throw invalid("tau " + std::to_string(tau) + " exceeds the horizon");
    factors.push_back(f);
  }
  return ExperimentPlan{model, grid, std::move(factors)};
}

ConvergenceResult run_convergence(const ExperimentConfig& cfg, const RunOptions& opts) {
  const ExperimentPlan plan = plan_experiment(cfg);
  const std::size_t n_taus = cfg.taus.size();
  std::vector<PathRecord> records(cfg.n_paths);

  for_each_path(cfg.n_paths, opts, [&](std::size_t path) {
    PathRecord& rec = records[path];
    rec.samples.assign(cfg.schemes.size() * n_taus, Sample{});
    std::vector<double> fine;
    run_reference(cfg, plan, path, fine, rec);
    if (!rec.ref_ok) return;
    for (std::size_t k = 0; k < n_taus; ++k) {
      const std::vector<double> coarse = coarsen(fine, plan.factors[k]);
      for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
        rec.samples[s * n_taus + k] = run_sample(cfg.schemes[s], plan.model, cfg.x0, coarse, cfg.taus[k]);
      }
    }
  });
  return reduce_errors(cfg, records, {}, opts);
}

ConvergenceResult run_efficiency(const ExperimentConfig& cfg, const RunOptions& opts) {
  const ExperimentPlan plan = plan_experiment(cfg);
  const std::size_t n_taus = cfg.taus.size();
  const std::size_t n_schemes = cfg.schemes.size();
  std::vector<PathRecord> records(cfg.n_paths);
  std::vector<std::vector<std::vector<double>>> coarse(cfg.n_paths);

  // Noise and reference may use every worker; only the timed loop is serial.
  for_each_path(cfg.n_paths, opts, [&](std::size_t path) {
    PathRecord& rec = records[path];
    rec.samples.assign(n_schemes * n_taus, Sample{});
    std::vector<double> fine;
    run_reference(cfg, plan, path, fine, rec);
    coarse[path].resize(n_taus);
    for (std::size_t k = 0; k < n_taus; ++k) coarse[path][k] = coarsen(fine, plan.factors[k]);
  });

  std::vector<double> timings(n_schemes * n_taus, 0.0);
  for (std::size_t s = 0; s < n_schemes; ++s) {
    for (std::size_t k = 0; k < n_taus; ++k) {
      const auto start = std::chrono::steady_clock::now();
      for (std::size_t path = 0; path < cfg.n_paths; ++path) {
        if (!records[path].ref_ok) continue;
        records[path].samples[s * n_taus + k] =
            run_sample(cfg.schemes[s], plan.model, cfg.x0, coarse[path][k], cfg.taus[k]);
      }
      const auto stop = std::chrono::steady_clock::now();
      timings[s * n_taus + k] = std::chrono::duration<double>(stop - start).count();
    }
  }
  return reduce_errors(cfg, records, timings, opts);
}

std::vector<PositivityRow> run_positivity_census(const ExperimentConfig& cfg, const RunOptions& opts) {
  const ExperimentPlan plan = plan_experiment(cfg);
  const double finest = *std::min_element(cfg.taus.begin(), cfg.taus.end());
  const GridSpec grid = GridSpec::from_step(cfg.horizon, finest);
  const std::size_t n_taus = cfg.taus.size();
  const std::size_t n_schemes = cfg.schemes.size();

  struct Counts {
    std::size_t steps = 0;
    std::size_t negative = 0;
    std::size_t backstops = 0;
    bool ok = false;
  };
  std::vector<std::vector<Counts>> records(cfg.n_paths);

  for_each_path(cfg.n_paths, opts, [&](std::size_t path) {
    auto& rec = records[path];
    rec.assign(n_schemes * n_taus, Counts{});
    std::vector<double> fine(grid.n_fine);
    fill_increments(cfg.master_seed, path, grid, fine);
    for (std::size_t k = 0; k < n_taus; ++k) {
      const std::vector<double> coarse = coarsen(fine, dyadic_factor(cfg.taus[k], finest));
      for (std::size_t s = 0; s < n_schemes; ++s) {
        const Sample smp = run_sample(cfg.schemes[s], plan.model, cfg.x0, coarse, cfg.taus[k]);
        rec[s * n_taus + k] = Counts{smp.diag.steps, smp.diag.negative_proposals, smp.diag.backstops, smp.ok};
      }
    }
  });

  std::vector<PositivityRow> rows;
  for (std::size_t s = 0; s < n_schemes; ++s) {
    for (std::size_t k = 0; k < n_taus; ++k) {
      PositivityRow row;
      row.scheme = cfg.schemes[s];
      row.tau = cfg.taus[k];
      std::size_t excluded = 0;
      for (const auto& rec : records) {
        const Counts& c = rec[s * n_taus + k];
        if (!c.ok) {
          ++excluded;
          continue;
        }
        ++row.n_paths;
        row.total_steps += c.steps;
        row.negative_proposals += c.negative;
        row.backstop_invocations += c.backstops;
      }
      check_exclusions(row.scheme, excluded, cfg.n_paths);
      rows.push_back(row);
    }
  }
  return rows;
}

MomentResult run_moment_tracking(const ExperimentConfig& cfg, std::span<const double> orders,
                                 const RunOptions& opts) {
  const ExperimentPlan plan = plan_experiment(cfg);
  MomentResult out;
  out.scheme = cfg.schemes.front();
  out.tau = cfg.taus.front();
  const GridSpec grid = GridSpec::from_step(cfg.horizon, out.tau);
  const std::size_t n_points = grid.n_fine + 1;

  for (double q : orders) {
    if (q <= 0.0) continue;
    char buf[160];
    if (!positive_moment_admissible(plan.model, q)) {
      std::snprintf(buf, sizeof buf, "order %g: E|Y|^%g is outside the admissible range (needs q >= %g)",
                    q, q, positive_moment_lower(plan.model));
      out.warnings.emplace_back(buf);
    }
    if (!negative_moment_admissible(plan.model, q)) {
      std::snprintf(buf, sizeof buf,
                    "order %g: E|Y|^-%g is outside the admissible range [%g, %g]", q, q,
                    negative_moment_lower(plan.model), negative_moment_upper(plan.model));
      out.warnings.emplace_back(buf);
    }
  }

  std::vector<std::vector<double>> paths(cfg.n_paths);
  for_each_path(cfg.n_paths, opts, [&](std::size_t path) {
    std::vector<double> dw(grid.n_fine);
    fill_increments(cfg.master_seed, path, grid, dw);
    const bool in_x = evolves_x(out.scheme);
    const double start = in_x ? cfg.x0 : lamperti(plan.model, cfg.x0);
    std::vector<double> traj;
    try {
      simulate_path(out.scheme, plan.model, start, dw, out.tau, &traj);
    } catch (const Error&) {
      return;  // left empty: excluded
    }
    if (in_x) {
      for (double& v : traj) v = lamperti(plan.model, v);
    }
    paths[path] = std::move(traj);
  });

  const std::size_t excluded = static_cast<std::size_t>(
      std::count_if(paths.begin(), paths.end(), [](const auto& v) { return v.empty(); }));
  check_exclusions(out.scheme, excluded, cfg.n_paths);
  out.n_paths = cfg.n_paths - excluded;

  const double denom = static_cast<double>(out.n_paths);
  for (std::size_t n = 0; n < n_points; ++n) {
    for (double q : orders) {
      MomentRow row;
      row.t = static_cast<double>(n) * out.tau;
      row.order = q;
      double sp = 0.0;
      double sn = 0.0;
      for (const auto& traj : paths) {
        if (traj.empty()) continue;
        const double y = std::abs(traj[n]);
        sp += std::pow(y, q);
        sn += std::pow(y, -q);
      }
      row.mean_abs_y_pow = sp / denom;
      row.mean_abs_y_negpow = sn / denom;
      out.rows.push_back(row);
    }
  }
  return out;
}

}  // namespace aitsde
