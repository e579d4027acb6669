// rggcross: constants, predictions, experiments and plane search.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rggcross/config.hpp"
#include "rggcross/crossings.hpp"
#include "rggcross/experiments.hpp"
#include "rggcross/parallel.hpp"
#include "rggcross/records.hpp"
#include "rggcross/theory.hpp"

namespace fs = std::filesystem;
using namespace rggcross;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Input errors (bad flags, malformed config or graph files) map to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

CLI::Validator count_validator() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        try {
          if (parse_count(s) < 1) return "must be at least 1";
        } catch (const std::exception& e) {
          return e.what();
        }
        return {};
      },
      "COUNT", "count");
}

Plane2 plane_from_source(const std::string& source, int d, std::uint64_t seed) {
  if (source == "coordinate") return Plane2::coordinate(d);
  auto rng = RandomStream::derive(seed, {stream_tag::kPlane});
  return sample_plane_haar(d, rng);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
}

// ---------------------------------------------------------------------------

struct ConstantsOpts {
  int d = 3;
  std::string body = "ball";
  std::string plane = "coordinate";
  std::string weight = "inverse_square";
  std::string n_samples = "1e6";
  std::uint64_t seed = 1;
  std::string out = "constants.json";
};

int cmd_constants(const ConstantsOpts& o, int workers) {
  const auto start = Clock::now();
  const ConvexBody body = ConvexBody::from_name(o.body, o.d);
  const Plane2 plane = plane_from_source(o.plane, o.d, o.seed);
  const auto k = theory::compute_constants(body, plane, o.plane, weight_from_name(o.weight), parse_count(o.n_samples),
                                           o.seed, workers);
  const json record = constants_record(k, body);
  write_json_file(o.out, record);

  RunManifest m;
  m.command = "constants";
  m.config = {{"d", o.d}, {"body", o.body}, {"plane", o.plane}, {"weight", o.weight},
              {"n_samples", parse_count(o.n_samples)}, {"seed", o.seed}};
  m.seed = o.seed;
  m.outputs = {o.out};
  m.wall_clock_seconds = seconds_since(start);
  write_json_file(o.out + ".manifest.json", to_json(m));

  fmt::print("d={} W={} plane={} N={} seed={}\n", k.d, k.body, k.plane, k.n_samples, k.seed);
  auto line = [](const char* name, const McEstimate& e) {
    fmt::print("  {:<15} {:.6g} +- {:.2g}\n", name, e.value, e.std_error);
  };
  line("c_d", k.c_d);
  line("c'_d", k.c_prime_d);
  line("I2", k.I2);
  line("I3", k.I3);
  line("S1", k.S1);
  line("S2", k.S2);
  line("section_stress", k.section_stress);
  for (const auto& [name, c] : record["checks"].items()) {
    fmt::print("  check {:<18} {}\n", name, c["pass"].get<bool>() ? "PASS" : "FAIL");
  }
  return constants_record_passes(record) ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

struct PredictOpts {
  int d = 3;
  std::string body = "ball";
  std::string plane = "coordinate";
  std::string weight = "inverse_square";
  std::vector<std::string> t;
  double delta = 0.0;
  std::string schedule = "thermodynamic";
  double c = 5.0;
  double beta = 0.5;
  std::string n_samples = "1e6";
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_predict(const PredictOpts& o, int workers) {
  const ConvexBody body = ConvexBody::from_name(o.body, o.d);
  const Plane2 plane = plane_from_source(o.plane, o.d, o.seed);
  RegimeSchedule sched;
  if (o.delta > 0.0) {
    sched = RegimeSchedule::fixed(o.delta);
  } else if (o.schedule == "thermodynamic") {
    sched = RegimeSchedule::thermodynamic(o.c);
  } else if (o.schedule == "dense") {
    sched = RegimeSchedule::dense(o.c, o.beta);
  } else {
    throw UsageError(fmt::format("--schedule: unknown schedule '{}'", o.schedule));
  }
  const auto k = theory::compute_constants(body, plane, o.plane, weight_from_name(o.weight), parse_count(o.n_samples),
                                           o.seed, workers);
  json rows = json::array();
  for (const auto& ts : o.t) {
    const double t = parse_real(ts);
    if (!(t > 0.0)) throw UsageError("--t: values must be positive");
    const auto p = theory::predict_moments(body, t, sched.delta_at(t, o.d), k);
    rows.push_back(to_json(p));
    fmt::print("t={:g} delta={:.6g} e_m={:.6g} e_cr={:.6g} var_cr=[{}, {}] e_stress={:.6g} var_stress={:.6g} "
               "cov_lb={:.6g} corr_lb={}\n",
               t, p.delta, p.e_m, p.e_cr, p.var_cr_lb ? fmt::format("{:.6g}", *p.var_cr_lb) : "n/a",
               p.var_cr_ub ? fmt::format("{:.6g}", *p.var_cr_ub) : "n/a", p.e_stress, p.var_stress, p.cov_lb,
               p.corr_lb ? fmt::format("{:.4f}", *p.corr_lb) : "n/a");
  }
  if (!o.out.empty()) {
    write_json_file(o.out, {{"constants", constants_record(k, body)}, {"schedule", sched.name()}, {"predictions", rows}});
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExperimentOpts {
  std::string config;
  std::string out_dir = "results";
  std::string only;
};

int cmd_experiment(const ExperimentOpts& o, int workers) {
  std::vector<ExperimentConfig> configs;
  try {
    configs = load_config(o.config);
  } catch (const ConfigError& e) {
    throw UsageError(fmt::format("config '{}': {}", o.config, e.what()));
  }
  bool all_passed = true;
  for (const auto& cfg : configs) {
    if (!o.only.empty() && cfg.name != o.only) continue;
    const auto start = Clock::now();
    const fs::path dir = fs::path(o.out_dir) / cfg.name;
    ensure_dir(dir);
    fmt::print("[{}] {} x {} replications, d={} {} {}\n", cfg.name, cfg.t_grid.size(), cfg.reps, cfg.d, cfg.body,
               cfg.schedule.name());
    const ExperimentResult r = run_experiment(cfg, workers);

    const fs::path raw = dir / "raw.csv";
    {
      std::ofstream out(raw);
      if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", raw.string()));
      write_samples_csv(out, r.samples);
    }
    std::vector<std::string> outputs{raw.string()};

    json summary = json::array();
    for (const auto& s : r.summary) {
      summary.push_back(to_json(s));
      fmt::print("  t={:g} delta={:.4g}: n {:.1f}  m {:.1f}  cr {:.1f} (var {:.4g})  stress {:.2f}  r {:.3f}\n", s.t,
                 s.delta, s.n.mean, s.m.mean, s.cr.mean, s.cr.variance, s.stress.mean, s.pearson_cr_stress);
    }

    json checks = json::array();
    if (!cfg.checks.empty()) {
      const ConvexBody body = cfg.convex_body();
      const Plane2 plane = cfg.plane_mode == PlaneMode::FixedSeeded ? fixed_plane(cfg) : Plane2::coordinate(cfg.d);
      const auto k = theory::compute_constants(body, plane, cfg.plane_mode == PlaneMode::FixedSeeded ? "fixed" : "coordinate",
                                               cfg.weight, cfg.constants_samples, cfg.seed, workers);
      const fs::path cpath = dir / "constants.json";
      write_json_file(cpath.string(), constants_record(k, body));
      outputs.push_back(cpath.string());
      json preds = json::array();
      for (const auto& s : r.summary) preds.push_back(to_json(theory::predict_moments(body, s.t, s.delta, k)));
      const fs::path ppath = dir / "predictions.json";
      write_json_file(ppath.string(), preds);
      outputs.push_back(ppath.string());

      for (const auto& name : cfg.checks) {
        CheckReport rep;
        if (name == "lln") rep = lln_check(r, k);
        else if (name == "sandwich") rep = variance_sandwich_check(r, k);
        else if (name == "correlation") rep = correlation_check(r, &k);
        else rep = cov_scaling_check(r);
        fmt::print("  {:<12} {:<12} {}\n", rep.name, status_name(rep.status), rep.message);
        if (rep.status == CheckStatus::Fail || rep.status == CheckStatus::Refused) all_passed = false;
        checks.push_back(to_json(rep));
      }
    }
    const fs::path spath = dir / "summary.json";
    write_json_file(spath.string(), {{"config", to_json(cfg)}, {"summary", summary}, {"checks", checks}});
    outputs.push_back(spath.string());

    RunManifest m;
    m.command = "experiment";
    m.config = to_json(cfg);
    m.seed = cfg.seed;
    m.outputs = outputs;
    m.wall_clock_seconds = seconds_since(start);
    write_json_file((dir / "manifest.json").string(), to_json(m));
  }
  return all_passed ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

struct SearchOpts {
  std::string graph;
  int K = 50;
  std::uint64_t seed = 1;
  std::string weight = "inverse_square";
  std::string out_dir = "search";
};

int cmd_search(const SearchOpts& o, int workers) {
  const auto start = Clock::now();
  std::ifstream in(o.graph);
  if (!in) throw UsageError(fmt::format("cannot open graph file '{}'", o.graph));
  GeometricGraph g;
  try {
    g = read_graph(in);
  } catch (const GraphParseError& e) {
    throw UsageError(fmt::format("{}: {}", o.graph, e.what()));
  }
  auto rng = RandomStream::derive(o.seed, {stream_tag::kSearch});
  const PlaneSearchReport rep = plane_search(g, o.K, rng, weight_from_name(o.weight), workers);

  const fs::path dir(o.out_dir);
  ensure_dir(dir);
  const fs::path table = dir / "planes.csv";
  {
    std::ofstream out(table);
    out << "plane,cr,stress\n";
    for (const auto& p : rep.planes) out << fmt::format("{},{},{:.17g}\n", p.index, p.cr, p.stress);
  }
  const fs::path drawing = dir / "best_drawing.txt";
  {
    const Drawing2 d = project_graph(g, rep.planes[rep.argmin_cr].plane);
    std::ofstream out(drawing);
    out << fmt::format("{}\n", d.positions.size());
    for (const auto& p : d.positions) out << fmt::format("{:.17g} {:.17g}\n", p.x, p.y);
    out << fmt::format("{}\n", d.edges.size());
    for (const auto& e : d.edges) out << fmt::format("{} {}\n", e.u, e.v);
  }
  const fs::path report = dir / "search.json";
  json j = to_json(rep);
  j["n"] = g.n();
  j["m"] = g.m();
  j["d"] = g.dim();
  write_json_file(report.string(), j);

  RunManifest m;
  m.command = "search";
  m.config = {{"graph", o.graph}, {"K", o.K}, {"seed", o.seed}, {"weight", o.weight}};
  m.seed = o.seed;
  m.outputs = {table.string(), drawing.string(), report.string()};
  m.wall_clock_seconds = seconds_since(start);
  write_json_file((dir / "manifest.json").string(), to_json(m));

  fmt::print("n={} m={} d={} planes={}\n", g.n(), g.m(), g.dim(), rep.planes.size());
  fmt::print("  best cr {} (plane {}), median cr {}\n", rep.planes[rep.argmin_cr].cr, rep.argmin_cr, rep.median_cr);
  fmt::print("  best stress {:.6g} (plane {})\n", rep.planes[rep.argmin_stress].stress, rep.argmin_stress);
  if (rep.lemma_applies) {
    fmt::print("  crossing lemma floor {:.6g}, ratio bound {:.4g}\n", rep.lemma_floor, rep.ratio_bound.value_or(0.0));
  } else {
    fmt::print("  crossing lemma does not apply (m < 7n)\n");
  }
  fmt::print("  cross-plane r(cr, stress) = {:.4f}\n", rep.correlation);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GenerateOpts {
  int d = 3;
  std::string body = "ball";
  double t = 1000.0;
  double delta = 0.1;
  std::uint64_t seed = 1;
  std::string out = "graph.txt";
};

int cmd_generate(const GenerateOpts& o) {
  const ConvexBody body = ConvexBody::from_name(o.body, o.d);
  auto rng = RandomStream::derive(o.seed, {stream_tag::kReplication});
  const GeometricGraph g = build_rgg(sample_poisson(body, o.t, rng), o.delta);
  std::ofstream out(o.out);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", o.out));
  write_graph(out, g);
  fmt::print("wrote {} (n={}, m={})\n", o.out, g.n(), g.m());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crossing numbers and stress of random geometric graphs projected onto planes"};
  app.set_version_flag("--version", std::string(RGGCROSS_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  int workers = hardware_workers();
  app.add_option("--workers", workers, "Worker threads (output does not depend on this)")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();

  const std::vector<std::string> bodies{"ball", "cube"};
  const std::vector<std::string> weights{"inverse_square", "unit"};

  ConstantsOpts co;
  auto* constants = app.add_subcommand("constants", "Estimate the crossing and stress constants");
  constants->add_option("--d", co.d, "Dimension")->check(CLI::Range(2, 64))->capture_default_str();
  constants->add_option("--body", co.body, "Unit-volume body")->check(CLI::IsMember(bodies))->capture_default_str();
  constants->add_option("--plane", co.plane, "Plane: coordinate or haar (seeded)")
      ->check(CLI::IsMember({"coordinate", "haar"}))
      ->capture_default_str();
  constants->add_option("--weight", co.weight, "Stress weight")->check(CLI::IsMember(weights))->capture_default_str();
  constants->add_option("--n-samples", co.n_samples, "Monte Carlo samples per estimator")
      ->check(count_validator())
      ->capture_default_str();
  constants->add_option("--seed", co.seed, "Random seed")->capture_default_str();
  constants->add_option("--out", co.out, "Output record (JSON)")->capture_default_str();

  PredictOpts po;
  auto* predict = app.add_subcommand("predict", "Leading-order moment predictions");
  predict->add_option("--d", po.d, "Dimension")->check(CLI::Range(2, 64))->capture_default_str();
  predict->add_option("--body", po.body, "Unit-volume body")->check(CLI::IsMember(bodies))->capture_default_str();
  predict->add_option("--plane", po.plane, "Plane: coordinate or haar (seeded)")
      ->check(CLI::IsMember({"coordinate", "haar"}))
      ->capture_default_str();
  predict->add_option("--weight", po.weight, "Stress weight")->check(CLI::IsMember(weights))->capture_default_str();
  predict->add_option("--t", po.t, "Intensities")->required();
  predict->add_option("--delta", po.delta, "Fixed radius (overrides --schedule)")->check(CLI::PositiveNumber);
  predict->add_option("--schedule", po.schedule, "thermodynamic or dense")
      ->check(CLI::IsMember({"thermodynamic", "dense"}))
      ->capture_default_str();
  predict->add_option("--c", po.c, "Schedule constant")->check(CLI::PositiveNumber)->capture_default_str();
  predict->add_option("--beta", po.beta, "Dense-schedule exponent")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  predict->add_option("--n-samples", po.n_samples, "Monte Carlo samples per constant")
      ->check(count_validator())
      ->capture_default_str();
  predict->add_option("--seed", po.seed, "Random seed")->capture_default_str();
  predict->add_option("--out", po.out, "Optional JSON output");

  ExperimentOpts eo;
  auto* experiment = app.add_subcommand("experiment", "Run replicated simulations and checks from a config file");
  experiment->add_option("--config", eo.config, "Experiment config (INI)")->required();
  experiment->add_option("--out-dir", eo.out_dir, "Output directory")->capture_default_str();
  experiment->add_option("--only", eo.only, "Run only the named section");

  SearchOpts so;
  auto* search = app.add_subcommand("search", "Project a graph onto random planes");
  search->add_option("--graph", so.graph, "Graph dump file")->required();
  search->add_option("--K", so.K, "Number of random planes")->check(CLI::Range(1, 1 << 24))->capture_default_str();
  search->add_option("--seed", so.seed, "Random seed")->capture_default_str();
  search->add_option("--weight", so.weight, "Stress weight")->check(CLI::IsMember(weights))->capture_default_str();
  search->add_option("--out-dir", so.out_dir, "Output directory")->capture_default_str();

  GenerateOpts go;
  auto* generate = app.add_subcommand("generate", "Sample a Poisson RGG and write it in the dump format");
  generate->add_option("--d", go.d, "Dimension")->check(CLI::Range(2, 64))->capture_default_str();
  generate->add_option("--body", go.body, "Unit-volume body")->check(CLI::IsMember(bodies))->capture_default_str();
  generate->add_option("--t", go.t, "Intensity")->check(CLI::PositiveNumber)->capture_default_str();
  generate->add_option("--delta", go.delta, "Connection radius")->check(CLI::PositiveNumber)->capture_default_str();
  generate->add_option("--seed", go.seed, "Random seed")->capture_default_str();
  generate->add_option("--out", go.out, "Output file")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (constants->parsed()) return cmd_constants(co, workers);
    if (predict->parsed()) return cmd_predict(po, workers);
    if (experiment->parsed()) return cmd_experiment(eo, workers);
    if (search->parsed()) return cmd_search(so, workers);
    if (generate->parsed()) return cmd_generate(go);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
