#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rggcross/geometry.hpp"
#include "rggcross/pointprocess.hpp"
#include "rggcross/stats.hpp"
#include "rggcross/stress.hpp"
#include "rggcross/theory.hpp"

namespace rggcross {

enum class PlaneMode { FixedSeeded, RandomPerRep };
enum class ProcessKind { Poisson, Binomial };

PlaneMode plane_mode_from_name(const std::string& name);
std::string plane_mode_name(PlaneMode m);
ProcessKind process_from_name(const std::string& name);
std::string process_name(ProcessKind p);

struct ExperimentConfig {
  std::string name = "experiment";
  std::string body = "ball";
  int d = 3;
  RegimeSchedule schedule = RegimeSchedule::thermodynamic(5.0);
  std::vector<double> t_grid;
  int reps = 200;
  PlaneMode plane_mode = PlaneMode::FixedSeeded;
  /// Selects the fixed plane in FixedSeeded mode; ignored otherwise.
  std::uint64_t plane_id = 0;
  WeightKind weight = WeightKind::InverseSquare;
  std::uint64_t seed = 1;
  ProcessKind process = ProcessKind::Poisson;
  /// Monte Carlo size for the constants the checks compare against.
  std::int64_t constants_samples = 10'000'000;
  /// Subset of {lln, sandwich, correlation, scaling}.
  std::vector<std::string> checks;

  ConvexBody convex_body() const { return ConvexBody::from_name(body, d); }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// The plane used by every replication of a FixedSeeded experiment.
Plane2 fixed_plane(const ExperimentConfig& cfg);

struct RepSample {
  double t = 0.0;
  double delta = 0.0;
  std::uint64_t rep = 0;
  std::uint64_t plane_id = 0;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t cr = 0;
  double stress = 0.0;
  bool degenerate = false;
};

/// One joint draw: points, graph, plane, crossings and stress. Depends only
/// on (cfg, t, rep).
RepSample run_replication(const ExperimentConfig& cfg, double t, std::uint64_t rep);

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
  stats::Interval mean_ci;
  stats::Interval variance_ci;
};

struct TSummary {
  double t = 0.0;
  double delta = 0.0;
  int reps = 0;
  MomentSummary n;
  MomentSummary m;
  MomentSummary cr;
  MomentSummary stress;
  double cov_cr_stress = 0.0;
  /// NaN when either observable is constant.
  double pearson_cr_stress = 0.0;
  int degenerate_reps = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RepSample> samples;  // t-major, reps in order
  std::vector<TSummary> summary;

  std::vector<RepSample> at(double t) const;
};

TSummary summarize(std::span<const RepSample> samples);

/// Runs reps replications per grid point on `workers` threads; the result
/// does not depend on `workers`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers = 1);

/// Raw table, header t,delta,rep,plane_id,n,m,cr,stress; floats with 17
/// significant digits.
void write_samples_csv(std::ostream& out, std::span<const RepSample> samples);

// ---------------------------------------------------------------------------
// Verification checks.

enum class CheckStatus { Pass, Fail, Warn, Inconclusive, Refused };
std::string status_name(CheckStatus s);

struct CheckReport {
  std::string name;
  CheckStatus status = CheckStatus::Inconclusive;
  std::string message;
  /// Flat numeric details, in insertion order.
  std::vector<std::pair<std::string, double>> values;

  void set(const std::string& key, double v) { values.emplace_back(key, v); }
  std::optional<double> get(const std::string& key) const;
  bool passed() const { return status == CheckStatus::Pass || status == CheckStatus::Warn; }
};

/// mean(cr)/(t^4 delta^(2d+2)) against c_d I2 / 8 along the grid. Passes when
/// the deviation at the largest t is within `tolerance` and the absolute
/// deviations are non-increasing, allowing one inversion that lies within the
/// confidence half width.
CheckReport lln_check(const ExperimentResult& r, const theory::Constants& k, double tolerance = 0.2);

/// Empirical Var(cr)/(t^7 delta^(4d+4)) with a batch-means interval against
/// [lb (1 - tau), ub (1 + tau)] at the largest t. Refused for d < 3 or a
/// random plane per replication.
CheckReport variance_sandwich_check(const ExperimentResult& r, const theory::Constants& k, double tau = 0.25);

/// Pearson r(cr, stress) at the largest t with a one-sided Fisher z test;
/// compared with the predicted correlation lower bound when available.
CheckReport correlation_check(const ExperimentResult& r, const theory::Constants* k = nullptr,
                              double alpha = 0.01);

/// OLS slope of log coefficient of variation against log t.
struct ScalingFit {
  double slope = 0.0;
  double slope_std_error = 0.0;
  std::size_t points = 0;
};
ScalingFit cov_scaling_fit(std::span<const double> t, std::span<const double> cov);

/// Slopes for cr and stress; passes when both lie in [lo, hi]. Needs four
/// or more grid points; a span under one decade only warns.
CheckReport cov_scaling_check(const ExperimentResult& r, double lo = -0.6, double hi = -0.4);

// ---------------------------------------------------------------------------

struct PlaneResult {
  std::size_t index = 0;
  Plane2 plane = Plane2::coordinate(2);
  std::uint64_t cr = 0;
  double stress = 0.0;
};

struct PlaneSearchReport {
  std::vector<PlaneResult> planes;
  std::size_t argmin_cr = 0;
  std::size_t argmin_stress = 0;
  double lemma_floor = 0.0;
  bool lemma_applies = false;
  /// min cr / floor when the crossing lemma applies.
  std::optional<double> ratio_bound;
  /// Pearson r of (cr, stress) across planes; NaN with fewer than two planes.
  double correlation = 0.0;
  double median_cr = 0.0;
  /// Fraction of planes with cr at most half the mean, and the Chebyshev
  /// bound 4 (sd / mean)^2 on that probability.
  double low_fraction = 0.0;
  double chebyshev_bound = 0.0;
};

/// Projects g onto K Haar planes (a single identity plane for d = 2).
PlaneSearchReport plane_search(const GeometricGraph& g, int K, RandomStream& rng,
                               WeightKind w = WeightKind::InverseSquare, int workers = 1);

}  // namespace rggcross
