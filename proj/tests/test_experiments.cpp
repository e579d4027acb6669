#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include "rggcross/crossings.hpp"
#include "rggcross/experiments.hpp"

using namespace rggcross;
using doctest::Approx;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.d = 3;
  cfg.schedule = RegimeSchedule::thermodynamic(5.0);
  cfg.t_grid = {100.0, 200.0};
  cfg.reps = 40;
  cfg.seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("replications are deterministic") {
  const ExperimentConfig cfg = small_config();
  const RepSample a = run_replication(cfg, 200.0, 3);
  const RepSample b = run_replication(cfg, 200.0, 3);
  CHECK(a.n == b.n);
  CHECK(a.m == b.m);
  CHECK(a.cr == b.cr);
  CHECK(a.stress == b.stress);
  const RepSample c = run_replication(cfg, 200.0, 4);
  CHECK((a.n != c.n || a.stress != c.stress));
}

TEST_CASE("conservation and edge cases") {
  ExperimentConfig cfg = small_config();
  for (std::uint64_t r = 0; r < 20; ++r) {
    const RepSample s = run_replication(cfg, 200.0, r);
    CHECK(s.m <= s.n * (s.n - 1) / 2);
    CHECK(s.cr <= s.m * (s.m - 1) / 2);
    CHECK(s.stress >= 0.0);
  }
  // Tiny intensity: at most three points, no two disjoint edges.
  cfg.t_grid = {0.01};
  cfg.schedule = RegimeSchedule::fixed(10.0);
  for (std::uint64_t r = 0; r < 50; ++r) {
    const RepSample s = run_replication(cfg, 0.01, r);
    if (s.n <= 3) CHECK(s.cr == 0);
  }
  // d = 2: identity plane, zero stress, count of the unit-disk drawing.
  ExperimentConfig flat = small_config();
  flat.d = 2;
  flat.schedule = RegimeSchedule::fixed(0.1);
  const RepSample s = run_replication(flat, 200.0, 0);
  CHECK(s.stress == 0.0);
  auto rng = RandomStream::derive(flat.seed, {stream_tag::kReplication, std::bit_cast<std::uint64_t>(200.0), 0});
  const GeometricGraph g = build_rgg(sample_poisson(ConvexBody::ball(2), 200.0, rng), 0.1);
  CHECK(s.cr == count_crossings_bruteforce(project_graph(g, Plane2::coordinate(2))).count);
}

TEST_CASE("experiment results are independent of worker count") {
  ExperimentConfig cfg = small_config();
  cfg.plane_mode = PlaneMode::RandomPerRep;
  const ExperimentResult a = run_experiment(cfg, 1);
  const ExperimentResult b = run_experiment(cfg, 4);
  std::ostringstream sa, sb;
  write_samples_csv(sa, a.samples);
  write_samples_csv(sb, b.samples);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("t,delta,rep,plane_id,n,m,cr,stress\n", 0) == 0);
  CHECK(a.summary[1].cr.variance == b.summary[1].cr.variance);
}

TEST_CASE("summary statistics") {
  ExperimentConfig cfg = small_config();
  cfg.reps = 2;
  cfg.t_grid = {5.0};
  const ExperimentResult tiny = run_experiment(cfg);
  CHECK(tiny.summary.size() == 1);
  CHECK(tiny.summary[0].reps == 2);
  CHECK(tiny.summary[0].n.variance >= 0.0);

  cfg = small_config();
  cfg.reps = 200;
  cfg.t_grid = {150.0};
  const ExperimentResult r = run_experiment(cfg);
  const TSummary& s = r.summary[0];
  CHECK(std::abs(s.n.mean - 150.0) < 4.0 * std::sqrt(150.0 / 200.0));
  CHECK(s.pearson_cr_stress >= -1.0);
  CHECK(s.pearson_cr_stress <= 1.0);
  CHECK(s.cr.mean_ci.contains(s.cr.mean));
  cfg.reps = 50;
  const ExperimentResult fewer = run_experiment(cfg);
  CHECK(fewer.summary[0].stress.mean_ci.half_width() > s.stress.mean_ci.half_width());
}

TEST_CASE("edge count matches the leading term") {
  ExperimentConfig cfg = small_config();
  cfg.schedule = RegimeSchedule::fixed(0.05);
  cfg.t_grid = {1000.0};
  cfg.reps = 200;
  const ExperimentResult r = run_experiment(cfg);
  const double expect = expected_edges(ConvexBody::ball(3), 1000.0, 0.05);
  CHECK(r.summary[0].m.mean == Approx(expect).epsilon(0.05));
}

TEST_CASE("binomial input reproduces Poisson means") {
  ExperimentConfig cfg = small_config();
  cfg.t_grid = {300.0};
  cfg.reps = 150;
  const ExperimentResult p = run_experiment(cfg);
  cfg.process = ProcessKind::Binomial;
  const ExperimentResult b = run_experiment(cfg);
  CHECK(b.summary[0].n.variance == 0.0);
  CHECK(p.summary[0].cr.mean_ci.overlaps(b.summary[0].cr.mean_ci));
  CHECK(p.summary[0].stress.mean_ci.overlaps(b.summary[0].stress.mean_ci));
}

TEST_CASE("adding a point never lowers cr or stress") {
  RandomStream rng(21);
  const auto W = ConvexBody::ball(3);
  for (int inst = 0; inst < 20; ++inst) {
    PointSet pts = sample_poisson(W, 300.0, rng);
    const Plane2 L = sample_plane_haar(3, rng);
    const double delta = 0.2;
    const GeometricGraph g = build_rgg(pts, delta);
    const auto extra = sample_uniform_body(W, rng);
    pts.push_back(extra);
    const GeometricGraph h = build_rgg(pts, delta);
    CHECK(crossing_number_of_projection(h, L).count >= crossing_number_of_projection(g, L).count);
    CHECK(stress_of_projection(h, L, WeightKind::InverseSquare) >= stress_of_projection(g, L, WeightKind::InverseSquare));
  }
}

TEST_CASE("scaling fit harness") {
  std::vector<double> t{100, 300, 1000, 3000, 10000};
  std::vector<double> cov;
  for (double x : t) cov.push_back(2.5 / std::sqrt(x));
  const ScalingFit f = cov_scaling_fit(t, cov);
  CHECK(std::abs(f.slope + 0.5) < 1e-6);
  CHECK_THROWS_AS(cov_scaling_fit(t, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("checks refuse or flag unusable input") {
  ExperimentConfig cfg = small_config();
  cfg.schedule = RegimeSchedule::fixed(1e-4);
  cfg.t_grid = {50.0};
  cfg.reps = 120;
  const ExperimentResult r = run_experiment(cfg);
  CHECK(r.summary[0].cr.mean == 0.0);
  CHECK(correlation_check(r).status == CheckStatus::Inconclusive);
  CHECK(cov_scaling_check(r).status == CheckStatus::Refused);
  theory::Constants k;
  k.d = 3;
  CHECK(lln_check(r, k).status == CheckStatus::Refused);
  ExperimentConfig flat = cfg;
  flat.d = 2;
  ExperimentResult r2 = r;
  r2.config = flat;
  CHECK(variance_sandwich_check(r2, k).status == CheckStatus::Refused);
  ExperimentResult r3 = r;
  r3.config.plane_mode = PlaneMode::RandomPerRep;
  CHECK(variance_sandwich_check(r3, k).status == CheckStatus::Refused);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.reps = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.t_grid = {200.0, 100.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.body = "torus";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("plane search") {
  RandomStream rng(31);
  const GeometricGraph g = build_rgg(sample_poisson(ConvexBody::ball(3), 400.0, rng), 0.3);
  RandomStream s1(1);
  const PlaneSearchReport one = plane_search(g, 1, s1);
  CHECK(one.planes.size() == 1);
  CHECK(one.argmin_cr == 0);
  RandomStream s2(2);
  const PlaneSearchReport many = plane_search(g, 30, s2);
  CHECK(many.planes.size() == 30);
  const auto best = many.planes[many.argmin_cr].cr;
  CHECK(static_cast<double>(best) <= many.median_cr);
  for (const auto& p : many.planes) CHECK(p.cr >= best);
  if (many.lemma_applies) {
    CHECK(static_cast<double>(best) >= many.lemma_floor);
    REQUIRE(many.ratio_bound);
    CHECK(*many.ratio_bound >= 1.0);
  }
  CHECK(many.chebyshev_bound >= 0.0);
  const GeometricGraph flat = build_rgg(sample_poisson(ConvexBody::ball(2), 200.0, rng), 0.1);
  RandomStream s3(3);
  CHECK(plane_search(flat, 25, s3).planes.size() == 1);
  CHECK_THROWS_AS(plane_search(g, 0, s3), std::invalid_argument);
}
