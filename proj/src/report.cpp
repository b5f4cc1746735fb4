#include "aitsde/report.hpp"

#include <cstdio>
#include <fstream>

#include "aitsde/error.hpp"

namespace aitsde {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string header(const CsvMeta& meta) {
  return "# aitsde version=" + std::string(kToolVersion) + " config_hash=" + meta.config_hash +
         " seed=" + std::to_string(meta.seed) + " T=" + num(meta.horizon) + "\n";
}

}  // namespace

CsvMeta csv_meta(const ExperimentConfig& cfg) {
  return CsvMeta{config_hash(cfg), cfg.master_seed, cfg.horizon};
}

std::string format_convergence_csv(std::span<const ErrorRow> rows, const CsvMeta& meta) {
  std::string out = header(meta);
  out += "scheme,tau,n_paths,rms_error_x,rms_error_y,wall_time_s,backstop_count,negative_proposal_count\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.scheme)) + "," + num(r.tau) + "," + std::to_string(r.n_paths) +
           "," + num(r.rms_error_x) + "," + num(r.rms_error_y) + "," + num(r.wall_time_s) + "," +
           std::to_string(r.backstop_count) + "," + std::to_string(r.negative_proposal_count) + "\n";
  }
  return out;
}

std::string format_rates_csv(std::span<const SchemeRate> rates, const CsvMeta& meta) {
  std::string out = header(meta);
  out += "scheme,slope,intercept,r_squared\n";
  for (const auto& r : rates) {
    out += std::string(to_string(r.scheme)) + "," + num(r.fit.slope) + "," + num(r.fit.intercept) +
           "," + num(r.fit.r_squared) + "\n";
  }
  return out;
}

std::string format_positivity_csv(std::span<const PositivityRow> rows, const CsvMeta& meta) {
  std::string out = header(meta);
  out += "scheme,tau,n_paths,total_steps,negative_proposals,backstop_invocations\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.scheme)) + "," + num(r.tau) + "," + std::to_string(r.n_paths) +
           "," + std::to_string(r.total_steps) + "," + std::to_string(r.negative_proposals) + "," +
           std::to_string(r.backstop_invocations) + "\n";
  }
  return out;
}

std::string format_moments_csv(const MomentResult& result, const CsvMeta& meta) {
  std::string out = header(meta);
  out += "# scheme=" + std::string(to_string(result.scheme)) + " tau=" + num(result.tau) +
         " n_paths=" + std::to_string(result.n_paths) + "\n";
  for (const auto& w : result.warnings) out += "# warning: " + w + "\n";
  out += "t,order,mean_abs_y_pow,mean_abs_y_negpow\n";
  for (const auto& r : result.rows) {
    out += num(r.t) + "," + num(r.order) + "," + num(r.mean_abs_y_pow) + "," +
           num(r.mean_abs_y_negpow) + "\n";
  }
  return out;
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(Errc::IoError, "cannot open " + file.string() + " for writing");
  os << text;
  if (!os) throw Error(Errc::IoError, "write failed for " + file.string());
}

}  // namespace aitsde
