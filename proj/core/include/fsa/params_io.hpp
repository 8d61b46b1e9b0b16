#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "fsa/model.hpp"

namespace fsa {

/// Configuration problem tied to one key (unknown key, wrong type, value
/// out of range). `key()` names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Config files are flat JSON objects. Recognised keys are the SystemParams
// field names: alpha, dark_count, eta_bob, mu, nu, f_ec, q_sift, e_detector,
// distance ("d" and "L" are accepted as aliases of dark_count and distance).
// An optional "preset" key selects the starting values; other keys override
// it.

/// Parses a config document. Throws ConfigError on any problem.
SystemParams params_from_json(std::string_view text, SystemParams base = {});

/// Reads and parses a config file.
SystemParams load_params(const std::string& path, SystemParams base = {});

/// Applies one "key=value" override.
void apply_override(SystemParams& p, std::string_view assignment);

/// Sets one field by name. Throws ConfigError for unknown names.
void set_param(SystemParams& p, std::string_view key, double value);

}  // namespace fsa
