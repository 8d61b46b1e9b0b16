#include "fsa/params_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fsa {

namespace {

double* field(SystemParams& p, std::string_view key) {
  if (key == "alpha") return &p.alpha;
  if (key == "dark_count" || key == "d") return &p.dark_count;
  if (key == "eta_bob") return &p.eta_bob;
  if (key == "mu") return &p.mu;
  if (key == "nu") return &p.nu;
  if (key == "f_ec") return &p.f_ec;
  if (key == "q_sift") return &p.q_sift;
  if (key == "e_detector") return &p.e_detector;
  if (key == "distance" || key == "L") return &p.distance;
  return nullptr;
}

}  // namespace

void set_param(SystemParams& p, std::string_view key, double value) {
  double* slot = field(p, key);
  if (slot == nullptr) throw ConfigError(std::string(key), "unknown config key '" + std::string(key) + "'");
  *slot = value;
}

SystemParams params_from_json(std::string_view text, SystemParams base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<document>", std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("<document>", "config must be a flat JSON object");

  SystemParams p = base;
  if (auto it = doc.find("preset"); it != doc.end()) {
    if (!it->is_string()) throw ConfigError("preset", "'preset' must be a string");
    try {
      p = preset(it->get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("preset", e.what());
    }
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "preset") continue;
    if (!value.is_number()) throw ConfigError(key, "config key '" + key + "' must be a number");
    set_param(p, key, value.get<double>());
  }
  return p;
}

SystemParams load_params(const std::string& path, SystemParams base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return params_from_json(buf.str(), base);
}

void apply_override(SystemParams& p, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError(std::string(assignment), "override must look like key=value");
  const std::string_view key = assignment.substr(0, eq);
  const std::string_view text = assignment.substr(eq + 1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError(std::string(key), "override '" + std::string(key) + "' needs a numeric value");
  set_param(p, key, value);
}

}  // namespace fsa
