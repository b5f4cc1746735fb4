#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "aitsde/harness.hpp"

namespace aitsde {

// Contents of the leading comment line of every CSV.
struct CsvMeta {
  std::string config_hash;
  std::uint64_t seed = 0;
  double horizon = 1.0;
};

CsvMeta csv_meta(const ExperimentConfig& cfg);

// Column layouts:
//   convergence: scheme,tau,n_paths,rms_error_x,rms_error_y,wall_time_s,backstop_count,negative_proposal_count
//   rates:       scheme,slope,intercept,r_squared
//   positivity:  scheme,tau,n_paths,total_steps,negative_proposals,backstop_invocations
//   moments:     t,order,mean_abs_y_pow,mean_abs_y_negpow
// Reals are printed with 17 significant digits so output is byte-stable.
std::string format_convergence_csv(std::span<const ErrorRow> rows, const CsvMeta& meta);
std::string format_rates_csv(std::span<const SchemeRate> rates, const CsvMeta& meta);
std::string format_positivity_csv(std::span<const PositivityRow> rows, const CsvMeta& meta);
// Admissibility warnings are emitted as "# warning:" comment lines.
std::string format_moments_csv(const MomentResult& result, const CsvMeta& meta);

void write_text_file(const std::filesystem::path& file, const std::string& text);

}  // namespace aitsde
