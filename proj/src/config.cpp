#include "aitsde/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "aitsde/error.hpp"

namespace aitsde {

using nlohmann::json;

namespace {

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(Errc::ConfigInvalid, std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, std::string("bad value for '") + key + "': " + e.what());
  }
}

SchemeId parse_scheme(const json& j) {
  if (!j.is_string()) throw Error(Errc::ConfigInvalid, "scheme names must be strings");
  const auto name = j.get<std::string>();
  const auto id = scheme_from_string(name);
  if (!id) throw Error(Errc::ConfigInvalid, "unknown scheme '" + name + "'");
  return *id;
}

}  // namespace

json model_params_to_json(const ModelParams& p) {
  return json{{"a_minus1", p.a_minus1}, {"a0", p.a0}, {"a1", p.a1},      {"a2", p.a2},
              {"b", p.b},               {"gamma", p.gamma}, {"theta", p.theta}};
}

ModelParams model_params_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::ConfigInvalid, "model parameters must be a JSON object");
  ModelParams p;
  p.a_minus1 = required<double>(j, "a_minus1");
  p.a0 = required<double>(j, "a0");
  p.a1 = required<double>(j, "a1");
  p.a2 = required<double>(j, "a2");
  p.b = required<double>(j, "b");
  p.gamma = required<double>(j, "gamma");
  p.theta = required<double>(j, "theta");
  return p;
}

json config_to_json(const ExperimentConfig& cfg) {
  json schemes = json::array();
  for (SchemeId s : cfg.schemes) schemes.push_back(std::string(to_string(s)));
  return json{{"model", model_params_to_json(cfg.model)},
              {"x0", cfg.x0},
              {"horizon", cfg.horizon},
              {"taus", cfg.taus},
              {"n_paths", cfg.n_paths},
              {"master_seed", cfg.master_seed},
              {"schemes", schemes},
              {"reference",
               {{"scheme", std::string(to_string(cfg.reference.scheme))}, {"tau", cfg.reference.tau}}},
              {"output_dir", cfg.output_dir}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::ConfigInvalid, "config must be a JSON object");
  ExperimentConfig cfg;
  cfg.model = model_params_from_json(required<json>(j, "model"));
  cfg.x0 = required<double>(j, "x0");
  cfg.horizon = required<double>(j, "horizon");
  cfg.taus = required<std::vector<double>>(j, "taus");
  cfg.n_paths = required<std::size_t>(j, "n_paths");
  cfg.master_seed = required<std::uint64_t>(j, "master_seed");
  const json schemes = required<json>(j, "schemes");
  if (!schemes.is_array()) throw Error(Errc::ConfigInvalid, "'schemes' must be an array");
  for (const auto& s : schemes) cfg.schemes.push_back(parse_scheme(s));
  const json ref = required<json>(j, "reference");
  cfg.reference.scheme = parse_scheme(required<json>(ref, "scheme"));
  cfg.reference.tau = required<double>(ref, "tau");
  cfg.output_dir = j.value("output_dir", std::string("."));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw Error(Errc::ConfigInvalid, "cannot open config " + file.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, file.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& cfg) {
  auto j = config_to_json(cfg);
  j.erase("output_dir");  // where results go is not part of the experiment
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

ModelParams non_critical_params() noexcept {
  return ModelParams{0.00107, 0.0517, 0.877, 4.604, 1.0, 3.0, 1.5};
}

ModelParams critical_params() noexcept {
  return ModelParams{0.00107, 0.0517, 0.877, 4.604, 1.0, 3.0, 2.0};
}

ExperimentConfig default_experiment(const ModelParams& params) {
  ExperimentConfig cfg;
  cfg.model = params;
  cfg.x0 = 1.0;
  cfg.horizon = 1.0;
  cfg.taus = {0x1p-7, 0x1p-8, 0x1p-9, 0x1p-10, 0x1p-11};
  cfg.n_paths = 500;
  cfg.master_seed = 20240611;
  cfg.schemes = {SchemeId::TSM, SchemeId::Splitting, SchemeId::BEM_Y, SchemeId::TEM_Y,
                 SchemeId::RefBEM_X};
  cfg.reference = ReferenceSpec{SchemeId::TamedMilstein_X, 0x1p-15};
  return cfg;
}

}  // namespace aitsde
