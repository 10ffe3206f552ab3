// metarole: command-line front end for the society simulator.
//
//   metarole run --society E0F0 --seed 7 [--out DIR] [--edges FILE]
//   metarole grid --runs 30 --seed 42 --out DIR
//   metarole calibrate-mortality --profile harsh|benign
//   metarole show-config --society E0F0
//
// Exit codes: 0 success, 2 configuration or usage error, 1 runtime error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metarole/metarole.hpp"

namespace {

using namespace metarole;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Globals {
  std::string config_path;
  bool literal_justif = false;
  std::optional<int> degree;
  bool quiet = false;
  unsigned jobs = 0;
};

SocietyConfig resolve(const std::string& label, const Globals& g) {
  std::optional<ConfigOverrides> file;
  if (!g.config_path.empty()) file = load_config_file(g.config_path);
  CliOverrides cli;
  cli.degree = g.degree;
  cli.literal_justif = g.literal_justif;
  return resolve_config(label, file ? &*file : nullptr, cli);
}

int cmd_run(const Globals& g, const std::string& label, std::uint64_t seed, const std::string& out,
            const std::string& edges) {
  const SocietyConfig cfg = resolve(label, g);
  auto state = init_society(cfg, seed);
  std::vector<YearlyStats> series;
  while (state.year < cfg.total_years) series.push_back(step_year(state));
  const RunResult result = summarise_run(cfg, seed, std::move(series));

  std::ostringstream csv;
  write_run_csv(csv, result);
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    prepare_output_dir(out, {cfg.label});
    const auto path = run_csv_path(out, cfg.label, seed);
    write_file(path, csv.str());
    if (!g.quiet) std::cerr << "wrote " << path.string() << '\n';
  }
  if (!edges.empty()) {
    std::ofstream f(edges);
    if (!f) throw IoError("cannot write " + edges);
    write_edge_list(f, state.agents);
  }
  if (!g.quiet) {
    std::cerr << cfg.label << " seed " << seed << ": permission "
              << (result.permission_ever_granted ? "granted" : "not granted");
    if (result.permission_year) std::cerr << " in year " << *result.permission_year;
    std::cerr << '\n';
  }
  return 0;
}

int cmd_grid(const Globals& g, int runs, std::uint64_t seed, const std::string& out) {
  BatchSpec spec;
  for (const auto& label : society_labels()) spec.societies.push_back(resolve(label, g));
  spec.runs_per_society = runs;
  spec.base_seed = seed;
  spec.output_dir = out;
  spec.jobs = g.jobs;
  const GridSummary summary = run_batch(spec);
  if (!g.quiet) write_summary_csv(std::cout, summary);
  return 0;
}

int cmd_calibrate(const Globals& g, const std::string& profile, int samples, std::uint64_t seed) {
  MortalityProfile p;
  double target = 0.0;
  if (profile == "harsh") {
    p = harsh_mortality();
    target = 35.0;
  } else if (profile == "benign") {
    p = benign_mortality();
    target = 60.0;
  } else {
    throw ConfigError("unknown mortality profile '" + profile + "' (expected harsh or benign)");
  }
  const double fitted = calibrate_hazard_scale(target, p.hazard_growth, p.cap_age);
  MortalityProfile fitted_profile = p;
  fitted_profile.hazard_scale = fitted;

  Rng rng(seed);
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) sum += sample_death_age(p, rng);

  std::cout << "profile=" << profile << '\n'
            << "target_mean_death_age=" << target << '\n'
            << "hazard_growth=" << p.hazard_growth << '\n'
            << "fitted_hazard_scale=" << fixed6(fitted) << '\n'
            << "fitted_mean_death_age=" << fixed6(expected_death_age(fitted_profile)) << '\n'
            << "default_hazard_scale=" << fixed6(p.hazard_scale) << '\n'
            << "default_mean_death_age=" << fixed6(expected_death_age(p)) << '\n'
            << "sampled_mean_death_age=" << fixed6(sum / samples) << " (n=" << samples << ")\n";
  (void)g;
  return 0;
}

int cmd_show(const Globals& g, const std::string& label) {
  print_config(std::cout, resolve(label, g));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-role institutional simulation"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "key=value overrides, grouped by [society.LABEL]");
  app.add_flag("--literal-justif", g.literal_justif,
               "private trade justified when FEW friends trade (literal comparison)");
  app.add_option("--degree", g.degree, "friends attached per recruit")->check(CLI::NonNegativeNumber);
  app.add_flag("--quiet", g.quiet, "suppress progress output");
  app.add_option("--jobs", g.jobs, "worker threads for grid (default: all cores)");

  std::string society;
  std::uint64_t seed = 42;
  std::string out;
  std::string edges;
  auto* run = app.add_subcommand("run", "simulate one society once");
  run->add_option("--society", society, "E0F0, E0F1, E1F0 or E1F1")->required();
  run->add_option("--seed", seed, "random seed");
  run->add_option("--out", out, "output directory (default: CSV on stdout)");
  run->add_option("--edges", edges, "write the final friend graph as an a,b edge list");

  int runs = 30;
  auto* grid = app.add_subcommand("grid", "all four societies, several seeds each");
  grid->add_option("--runs", runs, "runs per society")->check(CLI::PositiveNumber);
  grid->add_option("--seed", seed, "base seed; run i uses seed + i");
  grid->add_option("--out", out, "output directory")->required();

  std::string profile;
  int samples = 100000;
  auto* cal = app.add_subcommand("calibrate-mortality", "fit and check the hazard curve");
  cal->add_option("--profile", profile, "harsh or benign")->required();
  cal->add_option("--samples", samples, "sampled lifetimes")->check(CLI::PositiveNumber);
  cal->add_option("--seed", seed, "sampler seed");

  auto* show = app.add_subcommand("show-config", "print effective configuration");
  show->add_option("--society", society, "E0F0, E0F1, E1F0 or E1F1")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(g, society, seed, out, edges);
    if (*grid) return cmd_grid(g, runs, seed, out);
    if (*cal) return cmd_calibrate(g, profile, samples, seed);
    if (*show) return cmd_show(g, society);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
