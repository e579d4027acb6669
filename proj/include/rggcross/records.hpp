#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rggcross/experiments.hpp"
#include "rggcross/theory.hpp"

namespace rggcross {

using json = nlohmann::ordered_json;

json to_json(const McEstimate& e);
json to_json(const ExperimentConfig& cfg);
json to_json(const stats::Interval& ci);
json to_json(const MomentSummary& m);
json to_json(const TSummary& s);
json to_json(const CheckReport& r);
json to_json(const theory::MomentPredictions& p);
json to_json(const PlaneSearchReport& r, bool include_frames = true);

/// Constants plus the bound checks: c_d <= 2 pi kappa_d^2, the half-plane
/// hit fraction, c'_d <= 2 pi kappa_d c_d, and closed forms where known.
json constants_record(const theory::Constants& k, const ConvexBody& body);
/// True when every "pass" entry of a constants record holds.
bool constants_record_passes(const json& record);

struct RunManifest {
  std::string command;
  json config;
  std::uint64_t seed = 0;
  std::string version = RGGCROSS_VERSION;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> outputs;
};

json to_json(const RunManifest& m);

/// Writes `j` with two-space indentation and a trailing newline.
void write_json_file(const std::string& path, const json& j);

}  // namespace rggcross
