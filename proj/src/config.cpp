#include "wsm/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace wsm {

namespace {

using nlohmann::json;

void read_number(const json& j, const char* key, double& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_number())
    throw std::runtime_error(std::string("config key '") + key +
                             "' must be a number");
  out = j[key].get<double>();
}

}  // namespace

Config parse_config(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config is not valid JSON: ") +
                             e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config root must be an object");

  static const char* model_keys[] = {
      "alpha1", "beta1",      "gamma1",        "alpha2",      "beta2",
      "gamma2", "q_leasing",  "cost_advanced", "cost_leasing"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    bool known = key == "bargaining";
    for (const char* k : model_keys) known = known || key == k;
    if (!known)
      throw std::runtime_error("unknown config key '" + key + "'");
  }

  Config cfg;
  read_number(j, "alpha1", cfg.params.alpha1);
  read_number(j, "beta1", cfg.params.beta1);
  read_number(j, "gamma1", cfg.params.gamma1);
  read_number(j, "alpha2", cfg.params.alpha2);
  read_number(j, "beta2", cfg.params.beta2);
  read_number(j, "gamma2", cfg.params.gamma2);
  read_number(j, "q_leasing", cfg.params.q_leasing);
  read_number(j, "cost_advanced", cfg.params.cost_advanced);
  read_number(j, "cost_leasing", cfg.params.cost_leasing);

  if (j.contains("bargaining")) {
    const json& b = j["bargaining"];
    if (!b.is_object())
      throw std::runtime_error("'bargaining' must be an object");
    for (auto it = b.begin(); it != b.end(); ++it) {
      const std::string& key = it.key();
      if (key != "grid_steps" && key != "literal_pairing" &&
          key != "cost_adjusted_disagreement")
        throw std::runtime_error("unknown bargaining key '" + key + "'");
    }
    if (b.contains("grid_steps"))
      cfg.bargaining.grid_steps = b["grid_steps"].get<int>();
    if (b.contains("literal_pairing"))
      cfg.bargaining.literal_pairing = b["literal_pairing"].get<bool>();
    if (b.contains("cost_adjusted_disagreement"))
      cfg.bargaining.cost_adjusted_disagreement =
          b["cost_adjusted_disagreement"].get<bool>();
  }

  cfg.params.require_valid();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace wsm
