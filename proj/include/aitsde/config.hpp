#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aitsde/model.hpp"
#include "aitsde/schemes.hpp"
#include "json.hpp"

namespace aitsde {

inline constexpr const char* kToolVersion = "0.1.0";

struct ReferenceSpec {
  SchemeId scheme = SchemeId::TamedMilstein_X;
  double tau = 0x1p-15;

  friend bool operator==(const ReferenceSpec&, const ReferenceSpec&) = default;
};

struct ExperimentConfig {
  ModelParams model;
  double x0 = 1.0;
  double horizon = 1.0;
  std::vector<double> taus;
  std::size_t n_paths = 500;
  std::uint64_t master_seed = 0;
  std::vector<SchemeId> schemes;
  ReferenceSpec reference;
  std::string output_dir = ".";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Flat object with keys a_minus1, a0, a1, a2, b, gamma, theta.
nlohmann::json model_params_to_json(const ModelParams& p);
ModelParams model_params_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
// Throws Error(ConfigInvalid) on missing keys, wrong types or unknown schemes.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& file);

// FNV-1a 64 of the canonical JSON dump without output_dir, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

// Parameter sets used in the reference experiments: shared coefficients with
// theta = 1.5 (non-critical) or theta = 2 (critical).
ModelParams non_critical_params() noexcept;
ModelParams critical_params() noexcept;

// T = 1, x0 = 1, taus 2^-7..2^-11, TamedMilstein_X reference at 2^-15 and
// the five compared schemes.
ExperimentConfig default_experiment(const ModelParams& params);

}  // namespace aitsde
