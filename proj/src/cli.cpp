#include "aitsde/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aitsde/analysis.hpp"
#include "aitsde/config.hpp"
#include "aitsde/error.hpp"
#include "aitsde/harness.hpp"
#include "aitsde/plot.hpp"
#include "aitsde/report.hpp"

namespace aitsde {

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::string> out;
};

bool is_config_error(Errc c) {
  switch (c) {
    case Errc::ConfigInvalid:
    case Errc::NonPositiveCoefficient:
    case Errc::ExponentOutOfRange:
    case Errc::UnsupportedRegime:
    case Errc::InvalidGrid:
      return true;
    default:
      return false;
  }
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::ConfigInvalid, "cannot open " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigInvalid, path + ": " + e.what());
  }
}

// Accepts either a full experiment config or a flat parameter object.
ModelParams load_model_params(const std::string& path) {
  const auto j = read_json(path);
  if (j.is_object() && j.contains("model")) return model_params_from_json(j.at("model"));
  return model_params_from_json(j);
}

ExperimentConfig load_with_overrides(const std::string& path, const Overrides& ov) {
  ExperimentConfig cfg = config_from_json(read_json(path));
  if (ov.seed) cfg.master_seed = *ov.seed;
  if (ov.paths) cfg.n_paths = *ov.paths;
  if (ov.out) cfg.output_dir = *ov.out;
  return cfg;
}

RunOptions run_options() {
  RunOptions opts;
  opts.progress = true;
  if (const char* env = std::getenv("AITSDE_WORKERS")) {
    const int cap = std::atoi(env);
    if (cap > 0) opts.workers = std::min(cap, omp_get_max_threads());
  }
  return opts;
}

fs::path prepare_output(const ExperimentConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

int cmd_check_params(const std::string& config, std::ostream& out) {
  const Model m = Model::validate(load_model_params(config));
  out << "regime: " << to_string(m.regime()) << "\n";
  out << "lambda: " << fmt_g(m.lambda()) << "\n";
  out << "noise_coeff: " << fmt_g(m.noise_coeff()) << "\n";
  if (m.regime() == Regime::Critical) {
    out << "negative moments admissible for " << fmt_g(negative_moment_lower(m))
        << " <= p <= " << fmt_g(negative_moment_upper(m)) << "\n";
  } else {
    out << "negative moments admissible for p >= " << fmt_g(negative_moment_lower(m)) << "\n";
  }
  out << "positive moments admissible for p >= " << fmt_g(positive_moment_lower(m)) << "\n";
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
  const ExperimentPlan plan = plan_experiment(cfg);
  const double finest = *std::min_element(cfg.taus.begin(), cfg.taus.end());
  const GridSpec grid = GridSpec::from_step(cfg.horizon, finest);
  std::string csv = "# aitsde version=" + std::string(kToolVersion) + " config_hash=" +
                    config_hash(cfg) + " seed=" + std::to_string(cfg.master_seed) +
                    " T=" + fmt_g(cfg.horizon) + "\n";
  csv += "scheme,tau,path,terminal_x,backstops,negative_proposals\n";
  std::vector<double> fine(grid.n_fine);
  for (std::size_t path = 0; path < cfg.n_paths; ++path) {
    fill_increments(cfg.master_seed, path, grid, fine);
    for (double tau : cfg.taus) {
      const auto factor = static_cast<std::size_t>(std::llround(tau / finest));
      const auto coarse = coarsen(fine, factor);
      for (SchemeId s : cfg.schemes) {
        const PathResult r = simulate_path_x(s, plan.model, cfg.x0, coarse, tau);
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s,%.17g,%zu,%.17g,%zu,%zu\n", std::string(to_string(s)).c_str(),
                      tau, path, r.terminal, r.diagnostics.backstops, r.diagnostics.negative_proposals);
        csv += buf;
      }
    }
  }
  const fs::path file = prepare_output(cfg) / "simulate.csv";
  write_text_file(file, csv);
  out << "wrote " << file.string() << "\n";
  return kExitOk;
}

int cmd_convergence(const ExperimentConfig& cfg, bool efficiency, std::ostream& out) {
  const fs::path dir = prepare_output(cfg);
  const CsvMeta meta = csv_meta(cfg);
  const RunOptions opts = run_options();
  if (efficiency) {
    const ConvergenceResult res = run_efficiency(cfg, opts);
    write_text_file(dir / "efficiency.csv", format_convergence_csv(res.rows, meta));
    emit_loglog_svg(res.rows, dir / "efficiency.svg", PlotAxis::WallTime);
    out << "wrote " << (dir / "efficiency.csv").string() << ", " << (dir / "efficiency.svg").string()
        << "\n";
    return kExitOk;
  }
  const ConvergenceResult res = run_convergence(cfg, opts);
  write_text_file(dir / "convergence.csv", format_convergence_csv(res.rows, meta));
  write_text_file(dir / "rates.csv", format_rates_csv(res.rates, meta));
  emit_loglog_svg(res.rows, dir / "convergence.svg", PlotAxis::StepSize);
  for (const auto& r : res.rates) {
    out << to_string(r.scheme) << ": slope " << fmt_g(r.fit.slope) << " (r^2 " << fmt_g(r.fit.r_squared)
        << ")\n";
  }
  out << "wrote " << (dir / "convergence.csv").string() << ", " << (dir / "rates.csv").string() << ", "
      << (dir / "convergence.svg").string() << "\n";
  return kExitOk;
}

int cmd_positivity(const ExperimentConfig& cfg, std::ostream& out) {
  const fs::path dir = prepare_output(cfg);
  const auto rows = run_positivity_census(cfg, run_options());
  write_text_file(dir / "positivity.csv", format_positivity_csv(rows, csv_meta(cfg)));
  out << "wrote " << (dir / "positivity.csv").string() << "\n";
  return kExitOk;
}

int cmd_moments(const ExperimentConfig& cfg, const std::vector<double>& orders, std::ostream& out,
                std::ostream& err) {
  const fs::path dir = prepare_output(cfg);
  const MomentResult res = run_moment_tracking(cfg, orders, run_options());
  for (const auto& w : res.warnings) err << "warning: " << w << "\n";
  write_text_file(dir / "moments.csv", format_moments_csv(res, csv_meta(cfg)));
  out << "wrote " << (dir / "moments.csv").string() << "\n";
  return kExitOk;
}

int cmd_tau_eps(const std::string& config, double epsilon, double m1, double m2, double horizon,
                std::ostream& out) {
  PositivityBoundInputs in{Model::validate(load_model_params(config)), m1, m2, epsilon, horizon};
  in.validate();
  out << "tau_eps=" << fmt_g(tau_for_confidence(in)) << "\n";
  return kExitOk;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-stepping schemes for the generalized Ait-Sahalia interest-rate model", "aitsde"};
  app.require_subcommand(1);

  std::string config;
  Overrides ov;
  std::vector<double> orders{4.0};
  double epsilon = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double horizon = 1.0;

  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("config", config, "experiment config (JSON)")->required();
    sub->add_option("--seed", ov.seed, "override master_seed");
    sub->add_option("--paths", ov.paths, "override n_paths");
    sub->add_option("--out", ov.out, "override output_dir");
  };

  auto* check = app.add_subcommand("check-params", "validate model parameters and print derived constants");
  check->add_option("config", config, "config or flat parameter JSON")->required();
  auto* simulate = app.add_subcommand("simulate", "simulate paths and write simulate.csv");
  add_run_options(simulate);
  auto* convergence = app.add_subcommand("convergence", "strong-convergence study");
  add_run_options(convergence);
  auto* efficiency = app.add_subcommand("efficiency", "error versus wall time study");
  add_run_options(efficiency);
  auto* positivity = app.add_subcommand("positivity", "negativity and backstop census");
  add_run_options(positivity);
  auto* moments = app.add_subcommand("moments", "track sample moments of Y over time");
  add_run_options(moments);
  moments->add_option("--orders", orders, "moment orders q (E|Y|^q and E|Y|^-q)")->delimiter(',');
  auto* tau_eps = app.add_subcommand("tau-eps", "largest step size meeting the positivity confidence");
  tau_eps->add_option("config", config, "config or flat parameter JSON")->required();
  tau_eps->add_option("--epsilon", epsilon, "failure probability in (0, 1)")->required();
  tau_eps->add_option("--m1", m1, "lower state bound")->required();
  tau_eps->add_option("--m2", m2, "upper state bound")->required();
  tau_eps->add_option("--horizon", horizon, "time horizon T");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*check) return cmd_check_params(config, out);
    if (*tau_eps) return cmd_tau_eps(config, epsilon, m1, m2, horizon, out);
    const ExperimentConfig cfg = load_with_overrides(config, ov);
    if (*simulate) return cmd_simulate(cfg, out);
    if (*convergence) return cmd_convergence(cfg, false, out);
    if (*efficiency) return cmd_convergence(cfg, true, out);
    if (*positivity) return cmd_positivity(cfg, out);
    if (*moments) return cmd_moments(cfg, orders, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_config_error(e.code()) ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  err << "error: no command\n";
  return kExitUsage;
}

}  // namespace aitsde
