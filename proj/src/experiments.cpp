#include "rggcross/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "rggcross/crossings.hpp"
#include "rggcross/parallel.hpp"

namespace rggcross {

PlaneMode plane_mode_from_name(const std::string& name) {
  if (name == "fixed_seeded") return PlaneMode::FixedSeeded;
  if (name == "random_per_rep") return PlaneMode::RandomPerRep;
  throw std::invalid_argument(fmt::format("unknown plane mode '{}' (expected fixed_seeded or random_per_rep)", name));
}

std::string plane_mode_name(PlaneMode m) { return m == PlaneMode::FixedSeeded ? "fixed_seeded" : "random_per_rep"; }

ProcessKind process_from_name(const std::string& name) {
  if (name == "poisson") return ProcessKind::Poisson;
  if (name == "binomial") return ProcessKind::Binomial;
  throw std::invalid_argument(fmt::format("unknown process '{}' (expected poisson or binomial)", name));
}

std::string process_name(ProcessKind p) { return p == ProcessKind::Poisson ? "poisson" : "binomial"; }

void ExperimentConfig::validate() const {
  if (d < 2) throw std::invalid_argument("d: must be at least 2");
  if (body != "ball" && body != "cube") throw std::invalid_argument(fmt::format("body: unknown kind '{}'", body));
  if (reps < 2) throw std::invalid_argument("reps: must be at least 2");
  if (t_grid.empty()) throw std::invalid_argument("t_grid: empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw std::invalid_argument("t_grid: values must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("t_grid: must be strictly increasing");
  }
  if (constants_samples < 1) throw std::invalid_argument("constants_samples: must be at least 1");
  for (const auto& c : checks) {
    if (c != "lln" && c != "sandwich" && c != "correlation" && c != "scaling") {
      throw std::invalid_argument(fmt::format("checks: unknown check '{}'", c));
    }
  }
}

Plane2 fixed_plane(const ExperimentConfig& cfg) {
  auto rng = RandomStream::derive(cfg.seed, {stream_tag::kPlane, cfg.plane_id});
  return sample_plane_haar(cfg.d, rng);
}

namespace {

Plane2 replication_plane(const ExperimentConfig& cfg, double t, std::uint64_t rep) {
  if (cfg.plane_mode == PlaneMode::FixedSeeded) return fixed_plane(cfg);
  auto rng = RandomStream::derive(cfg.seed, {stream_tag::kPlane, std::bit_cast<std::uint64_t>(t), rep});
  return sample_plane_haar(cfg.d, rng);
}

}  // namespace

RepSample run_replication(const ExperimentConfig& cfg, double t, std::uint64_t rep) {
  const ConvexBody body = cfg.convex_body();
  auto rng = RandomStream::derive(cfg.seed, {stream_tag::kReplication, std::bit_cast<std::uint64_t>(t), rep});
  PointSet points = cfg.process == ProcessKind::Poisson
                        ? sample_poisson(body, t, rng)
                        : sample_binomial(body, static_cast<std::size_t>(std::llround(t)), rng);
  const double delta = cfg.schedule.delta_at(t, cfg.d);
  const GeometricGraph g = build_rgg(std::move(points), delta);
  const Plane2 plane = replication_plane(cfg, t, rep);

  RepSample s;
  s.t = t;
  s.delta = delta;
  s.rep = rep;
  s.plane_id = cfg.plane_mode == PlaneMode::FixedSeeded ? cfg.plane_id : rep;
  s.n = g.n();
  s.m = g.m();
  const CrossingCount cr = crossing_number_of_projection(g, plane);
  s.cr = cr.count;
  s.degenerate = cr.degenerate;
  s.stress = stress_of_projection(g, plane, cfg.weight);
  return s;
}

std::vector<RepSample> ExperimentResult::at(double t) const {
  std::vector<RepSample> out;
  for (const auto& s : samples) {
    if (s.t == t) out.push_back(s);
  }
  return out;
}

namespace {

MomentSummary moments(const std::vector<double>& x) {
  MomentSummary m;
  m.mean = stats::mean(x);
  m.variance = stats::variance(x);
  m.mean_ci = stats::batch_means_ci(x);
  m.variance_ci = stats::batch_variance_ci(x);
  return m;
}

}  // namespace

TSummary summarize(std::span<const RepSample> samples) {
  if (samples.empty()) throw std::invalid_argument("summarize: no samples");
  std::vector<double> n, m, cr, st;
  TSummary s;
  s.t = samples.front().t;
  s.delta = samples.front().delta;
  s.reps = static_cast<int>(samples.size());
  for (const auto& r : samples) {
    n.push_back(static_cast<double>(r.n));
    m.push_back(static_cast<double>(r.m));
    cr.push_back(static_cast<double>(r.cr));
    st.push_back(r.stress);
    if (r.degenerate) ++s.degenerate_reps;
  }
  s.n = moments(n);
  s.m = moments(m);
  s.cr = moments(cr);
  s.stress = moments(st);
  s.cov_cr_stress = stats::covariance(cr, st);
  s.pearson_cr_stress = stats::pearson(cr, st);
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  ExperimentResult r;
  r.config = cfg;
  const std::size_t reps = static_cast<std::size_t>(cfg.reps);
  r.samples.resize(cfg.t_grid.size() * reps);
  parallel_for(r.samples.size(), workers, [&](std::size_t job) {
    r.samples[job] = run_replication(cfg, cfg.t_grid[job / reps], job % reps);
  });
  for (std::size_t k = 0; k < cfg.t_grid.size(); ++k) {
    r.summary.push_back(summarize(std::span<const RepSample>(r.samples).subspan(k * reps, reps)));
  }
  return r;
}

void write_samples_csv(std::ostream& out, std::span<const RepSample> samples) {
  out << "t,delta,rep,plane_id,n,m,cr,stress\n";
  for (const auto& s : samples) {
    out << fmt::format("{:.17g},{:.17g},{},{},{},{},{},{:.17g}\n", s.t, s.delta, s.rep, s.plane_id, s.n, s.m, s.cr,
                       s.stress);
  }
}

}  // namespace rggcross
