#include "rggcross/records.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace rggcross {
namespace {

// JSON has no NaN or infinity.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

json bound_check(double value, double sigma, double bound) {
  return {{"value", value}, {"bound", bound}, {"pass", value <= bound + 4.0 * sigma}};
}

}  // namespace

json to_json(const McEstimate& e) {
  return {{"value", number(e.value)}, {"std_error", number(e.std_error)}, {"n_samples", e.n_samples}};
}

json to_json(const ExperimentConfig& cfg) {
  return {{"name", cfg.name},
          {"body", cfg.body},
          {"d", cfg.d},
          {"schedule",
           {{"kind", cfg.schedule.name()},
            {"c", cfg.schedule.c},
            {"beta", cfg.schedule.beta},
            {"delta", cfg.schedule.delta}}},
          {"t_grid", cfg.t_grid},
          {"reps", cfg.reps},
          {"plane_mode", plane_mode_name(cfg.plane_mode)},
          {"plane_id", cfg.plane_id},
          {"weight", weight_name(cfg.weight)},
          {"seed", cfg.seed},
          {"process", process_name(cfg.process)},
          {"constants_samples", cfg.constants_samples},
          {"checks", cfg.checks}};
}

json to_json(const stats::Interval& ci) { return {{"lo", number(ci.lo)}, {"hi", number(ci.hi)}}; }

json to_json(const MomentSummary& m) {
  return {{"mean", number(m.mean)},
          {"variance", number(m.variance)},
          {"mean_ci95", to_json(m.mean_ci)},
          {"variance_ci95", to_json(m.variance_ci)}};
}

json to_json(const TSummary& s) {
  return {{"t", s.t},
          {"delta", s.delta},
          {"reps", s.reps},
          {"n", to_json(s.n)},
          {"m", to_json(s.m)},
          {"cr", to_json(s.cr)},
          {"stress", to_json(s.stress)},
          {"cov_cr_stress", number(s.cov_cr_stress)},
          {"pearson_cr_stress", number(s.pearson_cr_stress)},
          {"degenerate_reps", s.degenerate_reps}};
}

json to_json(const CheckReport& r) {
  json values = json::object();
  for (const auto& [k, v] : r.values) values[k] = number(v);
  return {{"name", r.name}, {"status", status_name(r.status)}, {"message", r.message}, {"values", values}};
}

json to_json(const theory::MomentPredictions& p) {
  return {{"t", p.t},
          {"delta", p.delta},
          {"e_cr", number(p.e_cr)},
          {"var_cr_lb", optional_number(p.var_cr_lb)},
          {"var_cr_ub", optional_number(p.var_cr_ub)},
          {"e_stress", number(p.e_stress)},
          {"var_stress", number(p.var_stress)},
          {"cov_lb", number(p.cov_lb)},
          {"corr_lb", optional_number(p.corr_lb)},
          {"e_m", number(p.e_m)},
          {"notes", theory::prediction_notes()}};
}

json to_json(const PlaneSearchReport& r, bool include_frames) {
  json planes = json::array();
  for (const auto& p : r.planes) {
    json row = {{"index", p.index}, {"cr", p.cr}, {"stress", number(p.stress)}};
    if (include_frames) {
      row["u1"] = p.plane.u1();
      row["u2"] = p.plane.u2();
    }
    planes.push_back(row);
  }
  return {{"planes", planes},
          {"argmin_cr", r.argmin_cr},
          {"argmin_stress", r.argmin_stress},
          {"min_cr", r.planes.at(r.argmin_cr).cr},
          {"median_cr", r.median_cr},
          {"lemma_applies", r.lemma_applies},
          {"lemma_floor", r.lemma_floor},
          {"ratio_bound", optional_number(r.ratio_bound)},
          {"correlation", number(r.correlation)},
          {"low_fraction", r.low_fraction},
          {"chebyshev_bound", r.chebyshev_bound}};
}

json constants_record(const theory::Constants& k, const ConvexBody& body) {
  const int d = k.d;
  const double kd = kappa(d);
  const double hit_fraction = k.c_d.value / (kd * 4.0 * std::numbers::pi * kd);
  const double hit_sigma = k.c_d.std_error / (kd * 4.0 * std::numbers::pi * kd);
  const double cprime_sigma = std::hypot(k.c_prime_d.std_error, 2.0 * std::numbers::pi * kd * k.c_d.std_error);

  json checks = json::object();
  checks["c_d_cap"] = bound_check(k.c_d.value, k.c_d.std_error, 2.0 * std::numbers::pi * kd * kd);
  checks["c_d_half_hits"] = bound_check(hit_fraction, hit_sigma, 0.5);
  checks["c_prime_d_cap"] = {{"value", k.c_prime_d.value},
                             {"bound", 2.0 * std::numbers::pi * kd * k.c_d.value},
                             {"pass", k.c_prime_d.value <= 2.0 * std::numbers::pi * kd * k.c_d.value +
                                                               4.0 * cprime_sigma}};
  checks["I3_ge_I2_squared"] = {
      {"pass", k.I3.value + 4.0 * k.I3.std_error + 8.0 * k.I2.value * k.I2.std_error >= k.I2.value * k.I2.value}};

  json analytic = json::object();
  if (d == 2) {
    analytic["I2"] = 1.0;
    analytic["I3"] = 1.0;
  } else if (body.kind() == BodyKind::UnitVolumeBall) {
    analytic["I2"] = theory::I2_ball(d);
    analytic["I3"] = theory::I3_ball(d);
  }
  for (const char* key : {"I2", "I3"}) {
    if (!analytic.contains(key)) continue;
    const McEstimate& e = std::string(key) == "I2" ? k.I2 : k.I3;
    const double exact = analytic[key].get<double>();
    checks[std::string(key) + "_analytic"] = {
        {"mc", e.value}, {"exact", exact}, {"pass", std::abs(e.value - exact) <= 4.0 * e.std_error + 1e-12}};
  }

  return {{"d", d},
          {"W", k.body},
          {"plane", k.plane},
          {"weight", k.weight},
          {"N", k.n_samples},
          {"seed", k.seed},
          {"c_d", to_json(k.c_d)},
          {"c_prime_d", to_json(k.c_prime_d)},
          {"I2", to_json(k.I2)},
          {"I3", to_json(k.I3)},
          {"S1", to_json(k.S1)},
          {"S2", to_json(k.S2)},
          {"section_stress", to_json(k.section_stress)},
          {"kappa_d", kd},
          {"analytic", analytic},
          {"checks", checks}};
}

bool constants_record_passes(const json& record) {
  for (const auto& [name, c] : record.at("checks").items()) {
    if (!c.at("pass").get<bool>()) return false;
  }
  return true;
}

json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"version", m.version},
          {"seed", m.seed},
          {"config", m.config},
          {"wall_clock_seconds", m.wall_clock_seconds},
          {"outputs", m.outputs}};
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error(fmt::format("error writing '{}'", path));
}

}  // namespace rggcross
