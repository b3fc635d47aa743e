#include "phasereg_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <variant>

#include "phasereg/error.hpp"
#include "phasereg/evaluation.hpp"
#include "phasereg/frechet.hpp"
#include "phasereg/io.hpp"
#include "phasereg/parallel.hpp"
#include "phasereg/simulation.hpp"
#include "phasereg/transport.hpp"

namespace phasereg::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical-unit bandwidth used when reproducing the bimodal figures; the
// modes are about 1/32 of the domain wide.
constexpr double kBimodalFigureSigma = 0.025;
// Gaussian bandwidth (domain units) for plotted density estimates.
constexpr double kBimodalDensityBandwidth = 1.0;
constexpr double kTriangularDensityBandwidth = 0.1;

std::string indexed(const char* stem, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03zu.csv", stem, i);
  return buf;
}

ScenarioConfig make_scenario(const RunConfig& cfg, const std::string& name) {
  ScenarioConfig config;
  if (name == "bimodal") {
    config = BimodalScenarioConfig{};
  } else if (name == "triangular") {
    config = TriangularScenarioConfig{};
  } else if (name == "uniform") {
    config = UniformScenarioConfig{};
  } else {
    throw UsageError("unknown scenario '" + name + "' (expected bimodal, triangular or uniform)");
  }
  std::visit(
      [&](auto& c) {
        if (cfg.n) c.n = *cfg.n;
        if (cfg.tau) c.tau = *cfg.tau;
        if (cfg.seed) c.seed = *cfg.seed;
        c.grid_size = cfg.grid;
      },
      config);
  return config;
}

BandwidthPolicy bandwidth_from(const RunConfig& cfg, BandwidthPolicy policy) {
  if (cfg.sigma) policy.sigma = *cfg.sigma;
  if (cfg.alpha) {
    policy.alpha = *cfg.alpha;
    if (!cfg.sigma) policy.sigma.reset();
  }
  return policy;
}

void require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw UsageError(cfg.subcommand + " requires --seed");
}

double residual_offset(const std::string& scenario) {
  return scenario == "bimodal" ? 0.75 : 0.5;
}

void write_warps(const std::filesystem::path& dir, const char* stem,
                 const std::vector<WarpMap>& maps) {
  for (std::size_t i = 0; i < maps.size(); ++i) {
    write_text_file(dir / indexed(stem, i), warp_to_csv(maps[i]));
  }
}

void run_simulate(const RunConfig& cfg, std::ostream& out) {
  require_seed(cfg);
  const ScenarioConfig scenario = make_scenario(cfg, cfg.scenario);
  const ScenarioData data = simulate_scenario(scenario);
  write_text_file(cfg.out / "lambda.csv", measure_to_csv(data.lambda));
  write_warps(cfg.out / "warps", "warp", data.warps);
  write_text_file(cfg.out / "unwarped.json", patterns_to_json(data.domain, data.unwarped));
  write_text_file(cfg.out / "warped.json", patterns_to_json(data.domain, data.warped));
  json meta{{"scenario", data.name},
            {"n", data.warped.size()},
            {"tau", std::visit([](const auto& c) { return c.tau; }, scenario)},
            {"seed", *cfg.seed},
            {"grid", cfg.grid},
            {"domain", {data.domain.lo(), data.domain.hi()}}};
  if (!data.scales.empty()) meta["scales"] = data.scales;
  write_text_file(cfg.out / "scenario.json", meta.dump(2) + "\n");
  out << "simulated " << data.warped.size() << " " << data.name << " patterns into "
      << cfg.out.string() << "\n";
}

void run_register(const RunConfig& cfg, std::ostream& out) {
  if (cfg.input.empty()) throw UsageError("register requires --input");
  const PatternCollection input = patterns_from_json(read_text_file(cfg.input));
  PipelineOptions options;
  options.bandwidth = bandwidth_from(cfg, options.bandwidth);
  options.grid_size = cfg.grid;
  const RegistrationOutput result = pipeline(input.processes, options);

  write_text_file(cfg.out / "registered.json",
                  patterns_to_json(result.domain, result.registered));
  write_text_file(cfg.out / "lambda_hat.csv", measure_to_csv(result.lambda_hat));
  write_warps(cfg.out / "warps", "warp", result.warps);
  write_warps(cfg.out / "inverse_warps", "inverse_warp", result.inverse_warps);
  std::vector<std::size_t> counts;
  for (const auto& p : input.processes) counts.push_back(p.size());
  json summary{{"n", input.processes.size()},
               {"domain", {result.domain.lo(), result.domain.hi()}},
               {"c_hat", result.c_hat},
               {"counts", counts},
               {"sigmas", result.sigmas}};
  write_text_file(cfg.out / "summary.json", summary.dump(2) + "\n");
  out << "registered " << input.processes.size() << " patterns, c_hat = " << result.c_hat
      << "\n";
}

std::vector<std::pair<std::size_t, double>> parse_cells(const RunConfig& cfg,
                                                        const ScenarioConfig& scenario) {
  std::vector<std::pair<std::size_t, double>> cells;
  if (cfg.cells.empty()) {
    cells.emplace_back(scenario_size(scenario),
                       std::visit([](const auto& c) { return c.tau; }, scenario));
    return cells;
  }
  std::stringstream ss(cfg.cells);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(item);
      std::size_t used = 0;
      const long long n = std::stoll(item.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument(item);
      const std::string tau_text = item.substr(colon + 1);
      const double tau = std::stod(tau_text, &used);
      if (used != tau_text.size() || n <= 0 || !(tau > 0.0)) throw std::invalid_argument(item);
      cells.emplace_back(static_cast<std::size_t>(n), tau);
    } catch (const std::exception&) {
      throw UsageError("--cells expects n:tau pairs with positive values, got '" + item + "'");
    }
  }
  if (cells.empty()) throw UsageError("--cells is empty");
  return cells;
}

void write_residuals(const std::filesystem::path& path, const DiffuseMeasure& truth,
                     const DiffuseMeasure& barycenter_estimate,
                     const DiffuseMeasure& arithmetic_estimate, double offset) {
  const auto bary = residual_curve(barycenter_estimate, truth, offset);
  const auto arith = residual_curve(arithmetic_estimate, truth, offset);
  std::string csv = "x,barycenter,arithmetic\n";
  char buf[96];
  for (std::size_t k = 0; k < bary.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", bary[k].first, bary[k].second,
                  arith[k].second);
    csv += buf;
  }
  write_text_file(path, csv);
}

void run_compare(const RunConfig& cfg, std::ostream& out) {
  if (cfg.truth.empty()) throw UsageError("comparison mode needs --truth with --input");
  const DiffuseMeasure estimate = measure_from_csv(read_text_file(cfg.input));
  const DiffuseMeasure truth = measure_from_csv(read_text_file(cfg.truth));
  if (estimate.domain() != truth.domain()) {
    throw ValidationError("estimate and truth are defined on different domains");
  }
  json report{{"w2", wasserstein2(estimate, truth)}, {"w1", wasserstein1(estimate, truth)}};
  write_text_file(cfg.out / "comparison.json", report.dump(2) + "\n");
  out << "W2(estimate, truth) = " << report["w2"].get<double>() << "\n";
}

void run_evaluate(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.input.empty()) {
    run_compare(cfg, out);
    return;
  }
  require_seed(cfg);
  const ScenarioConfig scenario = make_scenario(cfg, cfg.scenario);
  StudyOptions options;
  options.replicates = cfg.replicates;
  options.bandwidth = bandwidth_from(cfg, options.bandwidth);
  options.grid_size = cfg.grid;
  options.seed = *cfg.seed;
  const auto cells = parse_cells(cfg, scenario);
  StudyReport report = run_study(scenario, cells, options);

  std::vector<double> ns;
  std::vector<double> errors;
  for (const auto& cell : report.cells) {
    ns.push_back(static_cast<double>(cell.n));
    errors.push_back(cell.median_of(&ReplicateMetrics::lambda_error));
  }
  if (std::adjacent_find(ns.begin(), ns.end(), std::greater_equal<>()) == ns.end() &&
      ns.size() >= 2) {
    report.slope = loglog_slope(ns, errors);
  }
  write_text_file(cfg.out / "study.json", study_report_to_json(report));

  // Residual curves of the first replicate in each cell, on the unit interval.
  const PipelineOptions pipe{options.bandwidth, options.grid_size};
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const ScenarioConfig cell_cfg = std::visit(
        [&](auto s) -> ScenarioConfig {
          s.n = cells[c].first;
          s.tau = cells[c].second;
          s.seed = derive_seed(options.seed, {c});
          return s;
        },
        scenario);
    const PipelineRun run = run_replicate(cell_cfg, 0, pipe);
    const Interval domain = run.data.domain;
    std::vector<DiffuseMeasure> hats;
    for (const auto& m : run.output.lambda_hats) {
      hats.push_back(rescale_affine(m, domain, kUnitInterval));
    }
    write_residuals(cfg.out / indexed("residuals_cell", c),
                    rescale_affine(run.data.lambda, domain, kUnitInterval),
                    rescale_affine(run.output.lambda_hat, domain, kUnitInterval),
                    arithmetic_mean(hats), residual_offset(cfg.scenario));
  }
  out << "evaluated " << cells.size() << " cell(s) x " << options.replicates
      << " replicates; lemma bound " << (report.lemma_bound_holds ? "holds" : "VIOLATED")
      << "\n";
}

void reproduce_one(const RunConfig& cfg, const std::string& name, std::ostream& out) {
  const ScenarioConfig scenario = make_scenario(cfg, name);
  BandwidthPolicy policy;
  if (name == "bimodal") policy.sigma = kBimodalFigureSigma;
  PipelineOptions pipe{bandwidth_from(cfg, policy), cfg.grid};
  const PipelineRun run = run_replicate(scenario, 0, pipe);
  const ScenarioData& data = run.data;
  const RegistrationOutput& result = run.output;
  const std::filesystem::path dir = cfg.out / name;

  const DiffuseMeasure naive = arithmetic_mean(result.lambda_hats);
  write_text_file(dir / "lambda.csv", measure_to_csv(data.lambda));
  write_text_file(dir / "lambda_hat.csv", measure_to_csv(result.lambda_hat));
  write_text_file(dir / "arithmetic_mean.csv", measure_to_csv(naive));
  for (std::size_t i = 0; i < result.lambda_hats.size(); ++i) {
    write_text_file(dir / "conditional" / indexed("lambda_hat", i),
                    measure_to_csv(result.lambda_hats[i]));
  }
  write_warps(dir / "warps", "true", data.warps);
  write_warps(dir / "warps", "estimated", result.warps);
  write_warps(dir / "warps", "registration", result.inverse_warps);
  write_text_file(dir / "unwarped.json", patterns_to_json(data.domain, data.unwarped));
  write_text_file(dir / "warped.json", patterns_to_json(data.domain, data.warped));
  write_text_file(dir / "registered.json", patterns_to_json(data.domain, result.registered));

  const bool bimodal = name == "bimodal";
  const double bandwidth = bimodal ? kBimodalDensityBandwidth : kTriangularDensityBandwidth;
  const std::vector<double> xs = uniform_grid(data.domain, 1025);
  const auto est = smoothed_density(result.lambda_hat, bandwidth, xs);
  const auto arith = smoothed_density(naive, bandwidth, xs);
  std::string csv = "x,true,barycenter,arithmetic\n";
  char buf[128];
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double truth = bimodal
                             ? bimodal_density(xs[k], BimodalScenarioConfig{}.epsilon)
                             : triangular_density(xs[k], 1.0);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", xs[k], truth, est[k], arith[k]);
    csv += buf;
  }
  write_text_file(dir / "density.csv", csv);

  const Interval domain = data.domain;
  std::vector<DiffuseMeasure> hats;
  for (const auto& m : result.lambda_hats) hats.push_back(rescale_affine(m, domain, kUnitInterval));
  write_residuals(dir / "residuals.csv", rescale_affine(data.lambda, domain, kUnitInterval),
                  rescale_affine(result.lambda_hat, domain, kUnitInterval),
                  arithmetic_mean(hats), residual_offset(name));

  json summary{{"scenario", name},
               {"n", data.warped.size()},
               {"seed", *cfg.seed},
               {"sigmas", result.sigmas},
               {"lambda_error", run.metrics.lambda_error},
               {"arithmetic_error", run.metrics.arithmetic_error},
               {"warp_error", run.metrics.warp_error}};
  if (bimodal) {
    summary["modes"] = find_modes(result.lambda_hat, kBimodalDensityBandwidth, 2);
  } else {
    std::vector<double> slopes;
    for (const auto& w : result.warps) slopes.push_back(fit_line(w, -0.9 * data.domain.hi(), 0.9 * data.domain.hi()).slope);
    summary["scales"] = data.scales;
    summary["fitted_slopes"] = slopes;
    summary["slope_correlation"] = pearson(slopes, data.scales);
  }
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");
  out << "reproduced " << name << " into " << dir.string() << "\n";
}

void run_reproduce(const RunConfig& cfg, std::ostream& out) {
  require_seed(cfg);
  if (cfg.scenario == "all") {
    reproduce_one(cfg, "bimodal", out);
    reproduce_one(cfg, "triangular", out);
  } else if (cfg.scenario == "bimodal" || cfg.scenario == "triangular") {
    reproduce_one(cfg, cfg.scenario, out);
  } else {
    throw UsageError("reproduce expects --scenario bimodal, triangular or all");
  }
}

// Fills options that were not given on the command line from a JSON object.
void merge_config(const std::filesystem::path& path, CLI::App& sub, RunConfig& cfg) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  if (!doc.is_object()) throw ValidationError(path.string() + ": config must be an object");
  auto unset = [&](const char* flag) {
    const CLI::Option* opt = sub.get_option_no_throw(std::string("--") + flag);
    return opt != nullptr && opt->count() == 0;
  };
  try {
    for (const auto& [key, value] : doc.items()) {
      if (!unset(key.c_str())) {
        if (sub.get_option_no_throw("--" + key) == nullptr) {
          throw UsageError("config key '" + key + "' is not an option of " + cfg.subcommand);
        }
        continue;
      }
      if (key == "scenario") cfg.scenario = value.get<std::string>();
      else if (key == "n") cfg.n = value.get<std::size_t>();
      else if (key == "tau") cfg.tau = value.get<double>();
      else if (key == "sigma") cfg.sigma = value.get<double>();
      else if (key == "alpha") cfg.alpha = value.get<double>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "grid") cfg.grid = value.get<std::size_t>();
      else if (key == "threads") cfg.threads = value.get<std::size_t>();
      else if (key == "replicates") cfg.replicates = value.get<std::size_t>();
      else if (key == "cells") cfg.cells = value.get<std::string>();
      else if (key == "out") cfg.out = value.get<std::string>();
      else if (key == "input") cfg.input = value.get<std::string>();
      else if (key == "truth") cfg.truth = value.get<std::string>();
    }
  } catch (const json::type_error& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

void check_values(const RunConfig& cfg) {
  if (cfg.n && *cfg.n == 0) throw UsageError("--n must be positive");
  if (cfg.tau && !(*cfg.tau > 0.0)) throw UsageError("--tau must be positive");
  if (cfg.sigma && !(*cfg.sigma > 0.0)) throw UsageError("--sigma must be positive");
  if (cfg.alpha && !(*cfg.alpha > 0.0)) throw UsageError("--alpha must be positive");
  if (cfg.grid < 2) throw UsageError("--grid must be at least 2");
  if (cfg.replicates == 0) throw UsageError("--replicates must be positive");
}

}  // namespace

void execute(const RunConfig& config, std::ostream& out) {
  check_values(config);
  if (config.threads > 0) set_thread_count(config.threads);
  if (config.subcommand == "simulate") run_simulate(config, out);
  else if (config.subcommand == "register") run_register(config, out);
  else if (config.subcommand == "evaluate") run_evaluate(config, out);
  else if (config.subcommand == "reproduce") run_reproduce(config, out);
  else throw UsageError("unknown subcommand '" + config.subcommand + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separate amplitude and phase variation in point processes"};
  app.name("phasereg");
  app.require_subcommand(1);

  RunConfig cfg;
  std::size_t n = 0;
  double tau = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::string config_path;

  auto add_shared = [&](CLI::App* sub) {
    sub->add_option("--sigma", sigma, "Fixed bandwidth on the unit interval");
    sub->add_option("--alpha", alpha, "Bandwidth exponent: sigma = min(m^-alpha, 1/4)");
    sub->add_option("--grid", cfg.grid, "CDF grid size")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
    sub->add_option("--out", cfg.out, "Output directory")->capture_default_str();
    sub->add_option("--config", config_path, "JSON file with defaults for these flags");
  };
  auto add_scenario = [&](CLI::App* sub) {
    sub->add_option("--scenario", cfg.scenario, "bimodal, triangular or uniform");
    sub->add_option("--n", n, "Number of processes");
    sub->add_option("--tau", tau, "Poisson intensity per process");
    sub->add_option("--seed", seed, "Master seed (required)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Simulate a scenario and write its truth");
  add_scenario(simulate);
  add_shared(simulate);

  CLI::App* reg = app.add_subcommand("register", "Register a JSON pattern collection");
  reg->add_option("--input", cfg.input, "Pattern collection JSON");
  add_shared(reg);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Run a simulation study, or compare --input against --truth");
  add_scenario(evaluate);
  add_shared(evaluate);
  evaluate->add_option("--replicates", cfg.replicates, "Replicates per cell")
      ->capture_default_str();
  evaluate->add_option("--cells", cfg.cells, "Comma-separated n:tau cells");
  evaluate->add_option("--input", cfg.input, "Estimated measure CSV (comparison mode)");
  evaluate->add_option("--truth", cfg.truth, "True measure CSV (comparison mode)");

  CLI::App* reproduce =
      app.add_subcommand("reproduce", "End-to-end figure runs written as CSV");
  add_scenario(reproduce);
  add_shared(reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  auto given = [&](const char* flag) {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--n")) cfg.n = n;
  if (given("--tau")) cfg.tau = tau;
  if (given("--sigma")) cfg.sigma = sigma;
  if (given("--alpha")) cfg.alpha = alpha;
  if (given("--seed")) cfg.seed = seed;

  try {
    if (!config_path.empty()) merge_config(config_path, *sub, cfg);
    if (cfg.scenario.empty()) cfg.scenario = cfg.subcommand == "reproduce" ? "all" : "bimodal";
    execute(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kSuccess;
}

}  // namespace phasereg::cli
