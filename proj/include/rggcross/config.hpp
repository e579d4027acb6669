#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rggcross/experiments.hpp"

namespace rggcross {

/// Configuration error tied to one key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// INI-style experiment file. Keys are ExperimentConfig field names
/// (schedule parameters as schedule_c, schedule_beta, schedule_delta). Keys
/// before the first section are defaults for every section; a file without
/// sections describes one experiment named `default_name`.
///
///   seed = 42
///   [ball-d3]
///   body = ball
///   d = 3
///   schedule = thermodynamic
///   schedule_c = 5
///   t_grid = 250, 500, 1000, 2000
std::vector<ExperimentConfig> parse_config(std::istream& in, const std::string& default_name = "experiment");
std::vector<ExperimentConfig> load_config(const std::string& path);

/// Writes one section that parse_config reads back to an equal config.
void write_config(std::ostream& out, const ExperimentConfig& cfg);

/// Parses "1e7", "10000000"; rejects non-integral or out-of-range values.
std::int64_t parse_count(const std::string& text);
/// Parses a finite real.
double parse_real(const std::string& text);

}  // namespace rggcross
