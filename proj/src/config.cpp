#include "rggcross/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace rggcross {

ConfigError::ConfigError(std::string key, const std::string& what)
    : std::runtime_error(key.empty() ? what : fmt::format("{}: {}", key, what)), key_(std::move(key)) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (char ch : s) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item.push_back(ch);
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

std::uint64_t parse_u64(const std::string& text) {
  const std::string s = trim(text);
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument(fmt::format("'{}' is not an unsigned integer", text));
  }
  return v;
}

using Setter = void (*)(ExperimentConfig&, const std::string&);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"name", [](ExperimentConfig& c, const std::string& v) { c.name = v; }},
      {"body",
       [](ExperimentConfig& c, const std::string& v) {
         if (v != "ball" && v != "cube") throw std::invalid_argument(fmt::format("unknown body kind '{}'", v));
         c.body = v;
       }},
      {"d",
       [](ExperimentConfig& c, const std::string& v) {
         const auto d = parse_count(v);
         if (d < 2 || d > 64) throw std::invalid_argument("must be between 2 and 64");
         c.d = static_cast<int>(d);
       }},
      {"schedule",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "thermodynamic") {
           c.schedule.kind = RegimeKind::Thermodynamic;
         } else if (v == "dense") {
           c.schedule.kind = RegimeKind::Dense;
         } else if (v == "fixed") {
           c.schedule.kind = RegimeKind::Fixed;
         } else {
           throw std::invalid_argument(fmt::format("unknown schedule '{}' (thermodynamic, dense, fixed)", v));
         }
       }},
      {"schedule_c",
       [](ExperimentConfig& c, const std::string& v) {
         c.schedule.c = parse_real(v);
         if (!(c.schedule.c > 0.0)) throw std::invalid_argument("must be positive");
       }},
      {"schedule_beta",
       [](ExperimentConfig& c, const std::string& v) {
         c.schedule.beta = parse_real(v);
         if (!(c.schedule.beta > 0.0 && c.schedule.beta <= 1.0)) throw std::invalid_argument("must lie in (0, 1]");
       }},
      {"schedule_delta",
       [](ExperimentConfig& c, const std::string& v) {
         c.schedule.delta = parse_real(v);
         if (!(c.schedule.delta > 0.0)) throw std::invalid_argument("must be positive");
       }},
      {"t_grid",
       [](ExperimentConfig& c, const std::string& v) {
         c.t_grid.clear();
         for (const auto& item : split_list(v)) c.t_grid.push_back(parse_real(item));
       }},
      {"reps",
       [](ExperimentConfig& c, const std::string& v) {
         const auto r = parse_count(v);
         if (r < 2 || r > (1LL << 30)) throw std::invalid_argument("must be at least 2");
         c.reps = static_cast<int>(r);
       }},
      {"plane_mode", [](ExperimentConfig& c, const std::string& v) { c.plane_mode = plane_mode_from_name(v); }},
      {"plane_id", [](ExperimentConfig& c, const std::string& v) { c.plane_id = parse_u64(v); }},
      {"weight", [](ExperimentConfig& c, const std::string& v) { c.weight = weight_from_name(v); }},
      {"seed", [](ExperimentConfig& c, const std::string& v) { c.seed = parse_u64(v); }},
      {"process", [](ExperimentConfig& c, const std::string& v) { c.process = process_from_name(v); }},
      {"constants_samples",
       [](ExperimentConfig& c, const std::string& v) {
         c.constants_samples = parse_count(v);
         if (c.constants_samples < 1) throw std::invalid_argument("must be at least 1");
       }},
      {"checks", [](ExperimentConfig& c, const std::string& v) { c.checks = split_list(v); }},
  };
  return table;
}

void apply(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError(key, "unknown key");
  try {
    it->second(cfg, trim(value));
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

// Maps validate() messages ("field: ...") back to their key.
void validate_named(const ExperimentConfig& cfg) {
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    if (colon == std::string::npos) throw ConfigError("", msg);
    throw ConfigError(msg.substr(0, colon), trim(msg.substr(colon + 1)));
  }
}

}  // namespace

std::int64_t parse_count(const std::string& text) {
  const double v = parse_real(text);
  if (v != std::floor(v) || v < -9.0e18 || v > 9.0e18) {
    throw std::invalid_argument(fmt::format("'{}' is not an integer", text));
  }
  return static_cast<std::int64_t>(v);
}

double parse_real(const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument(fmt::format("'{}' is not a number", text));
  }
  return v;
}

std::vector<ExperimentConfig> parse_config(std::istream& in, const std::string& default_name) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", fmt::format("line {}: {}", e.line(), e.message()));
  }

  ExperimentConfig defaults;
  defaults.name = default_name;
  std::vector<const pt::ptree::value_type*> sections;
  for (const auto& entry : tree) {
    if (entry.second.empty()) {
      apply(defaults, entry.first, entry.second.data());
    } else {
      sections.push_back(&entry);
    }
  }

  std::vector<ExperimentConfig> out;
  if (sections.empty()) {
    validate_named(defaults);
    out.push_back(defaults);
    return out;
  }
  for (const auto* sec : sections) {
    ExperimentConfig cfg = defaults;
    cfg.name = sec->first;
    for (const auto& kv : sec->second) apply(cfg, kv.first, kv.second.data());
    validate_named(cfg);
    out.push_back(cfg);
  }
  return out;
}

std::vector<ExperimentConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", fmt::format("cannot open config file '{}'", path));
  std::string stem = path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (const auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
  return parse_config(in, stem);
}

void write_config(std::ostream& out, const ExperimentConfig& cfg) {
  std::string grid;
  for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) grid += fmt::format("{}{:.17g}", i ? ", " : "", cfg.t_grid[i]);
  std::string checks;
  for (std::size_t i = 0; i < cfg.checks.size(); ++i) checks += fmt::format("{}{}", i ? ", " : "", cfg.checks[i]);
  const char* schedule = cfg.schedule.kind == RegimeKind::Thermodynamic ? "thermodynamic"
                         : cfg.schedule.kind == RegimeKind::Dense       ? "dense"
                                                                        : "fixed";
  out << fmt::format("[{}]\n", cfg.name);
  out << fmt::format("body = {}\n", cfg.body);
  out << fmt::format("d = {}\n", cfg.d);
  out << fmt::format("schedule = {}\n", schedule);
  out << fmt::format("schedule_c = {:.17g}\n", cfg.schedule.c);
  out << fmt::format("schedule_beta = {:.17g}\n", cfg.schedule.beta);
  out << fmt::format("schedule_delta = {:.17g}\n", cfg.schedule.delta);
  out << fmt::format("t_grid = {}\n", grid);
  out << fmt::format("reps = {}\n", cfg.reps);
  out << fmt::format("plane_mode = {}\n", plane_mode_name(cfg.plane_mode));
  out << fmt::format("plane_id = {}\n", cfg.plane_id);
  out << fmt::format("weight = {}\n", weight_name(cfg.weight));
  out << fmt::format("seed = {}\n", cfg.seed);
  out << fmt::format("process = {}\n", process_name(cfg.process));
  out << fmt::format("constants_samples = {}\n", cfg.constants_samples);
  if (!checks.empty()) out << fmt::format("checks = {}\n", checks);
}

}  // namespace rggcross
