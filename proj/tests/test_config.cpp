#include <doctest.h>

#include <stdexcept>

#include <sstream>

#include "rggcross/config.hpp"

using namespace rggcross;

namespace {

std::string error_key(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_config(in);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("sections inherit root defaults") {
  std::istringstream in(
      "seed = 42\nd = 3\n"
      "[a]\nbody = ball\nt_grid = 100, 200 400\nreps = 1e2\n"
      "[b]\nbody = cube\nschedule = dense\nschedule_c = 2\nschedule_beta = 0.75\nt_grid = 10\n"
      "plane_mode = random_per_rep\nprocess = binomial\nweight = unit\nchecks = lln, scaling\n");
  const auto cfgs = parse_config(in);
  REQUIRE(cfgs.size() == 2);
  CHECK(cfgs[0].name == "a");
  CHECK(cfgs[0].seed == 42);
  CHECK(cfgs[0].t_grid == std::vector<double>{100, 200, 400});
  CHECK(cfgs[0].reps == 100);
  CHECK(cfgs[1].body == "cube");
  CHECK(cfgs[1].schedule.kind == RegimeKind::Dense);
  CHECK(cfgs[1].schedule.beta == 0.75);
  CHECK(cfgs[1].plane_mode == PlaneMode::RandomPerRep);
  CHECK(cfgs[1].process == ProcessKind::Binomial);
  CHECK(cfgs[1].weight == WeightKind::Unit);
  CHECK(cfgs[1].checks == std::vector<std::string>{"lln", "scaling"});
}

TEST_CASE("a file without sections is one experiment") {
  std::istringstream in("t_grid = 10\nreps = 3\n");
  const auto cfgs = parse_config(in, "solo");
  REQUIRE(cfgs.size() == 1);
  CHECK(cfgs[0].name == "solo");
}

TEST_CASE("errors name the offending key") {
  CHECK(error_key("t_grid = 10\nbody = torus\n") == "body");
  CHECK(error_key("t_grid = 10\nbodyy = ball\n") == "bodyy");
  CHECK(error_key("t_grid = 10\nreps = 2.5\n") == "reps");
  CHECK(error_key("t_grid = 10, 5\n") == "t_grid");
  CHECK(error_key("t_grid = 10\nd = 1\n") == "d");
  CHECK(error_key("t_grid = 10\nseed = -3\n") == "seed");
  CHECK(error_key("t_grid = 10\nchecks = lln, magic\n") == "checks");
  CHECK(error_key("reps = 5\n") == "t_grid");
}

TEST_CASE("write_config round trip") {
  ExperimentConfig cfg;
  cfg.name = "rt";
  cfg.body = "cube";
  cfg.d = 4;
  cfg.schedule = RegimeSchedule::dense(1.5, 0.6);
  cfg.t_grid = {0.1, 1.0 / 3.0, 1e5};
  cfg.reps = 17;
  cfg.plane_mode = PlaneMode::RandomPerRep;
  cfg.plane_id = 3;
  cfg.seed = 18446744073709551615ULL;
  cfg.checks = {"correlation"};
  std::stringstream ss;
  write_config(ss, cfg);
  const auto back = parse_config(ss);
  REQUIRE(back.size() == 1);
  const auto& b = back[0];
  CHECK(b.name == "rt");
  CHECK(b.body == "cube");
  CHECK(b.d == 4);
  CHECK(b.schedule.kind == RegimeKind::Dense);
  CHECK(b.schedule.c == 1.5);
  CHECK(b.t_grid == cfg.t_grid);
  CHECK(b.reps == 17);
  CHECK(b.plane_id == 3);
  CHECK(b.seed == cfg.seed);
  CHECK(b.checks == cfg.checks);
}

TEST_CASE("numeric parsing") {
  CHECK(parse_count("1e7") == 10'000'000);
  CHECK(parse_count("250") == 250);
  CHECK_THROWS_AS(parse_count("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real("inf"), std::invalid_argument);
  CHECK(parse_real(" 2.5e-3 ") == 0.0025);
}

TEST_CASE("bundled configs parse") {
  for (const char* name : {"ball-d3-thermo.ini", "smoke.ini"}) {
    const auto cfgs = load_config(std::string(RGGCROSS_CONFIGS) + "/" + name);
    CHECK(!cfgs.empty());
  }
}
