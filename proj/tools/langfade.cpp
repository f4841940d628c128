// langfade: ingest n-gram counts, fit the attention-fading model, simulate
// trajectories and write analysis reports.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "langfade/commands.hpp"
#include "langfade/error.hpp"

namespace {

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output;
  bool svg = false;
  std::vector<std::string> overrides;
};

langfade::RunConfig build_config(const GlobalFlags& g) {
  langfade::RunConfig cfg = g.config.empty() ? langfade::RunConfig{} : langfade::load_config(g.config);
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw langfade::UsageError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1), std::filesystem::current_path());
  }
  if (g.seed) cfg.seed = *g.seed;
  if (!g.output.empty()) cfg.output_dir = g.output;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attention-fading model of competing linguistic variants"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--config", g.config, "Run configuration file (key = value)");
  app.add_option("--seed", g.seed, "Seed for bootstrap and permutation tests");
  app.add_option("--output", g.output, "Output directory");
  app.add_flag("--svg", g.svg, "Also write SVG plots (simulate)");
  app.add_option("--set", g.overrides, "Override a config key: --set key=value (repeatable)");

  auto* ingest = app.add_subcommand("ingest", "Aggregate n-gram files into per-verb yearly counts");
  auto* fit = app.add_subcommand("fit", "Fit (s0, tau) per verb and a global a");
  auto* report = app.add_subcommand("report", "Power-law, CDH and Zipf analyses of a fit report");
  auto* simulate = app.add_subcommand("simulate", "Write a model trajectory as CSV");

  langfade::SimulateRequest sim;
  std::string mode = "continuous";
  std::string out;
  simulate->add_option("--mode", mode, "discrete | continuous | phase")->capture_default_str();
  simulate->add_option("--a", sim.a, "Attention amplitude (1/years)")->capture_default_str();
  simulate->add_option("--tau", sim.tau, "Relaxation time (years)")->capture_default_str();
  simulate->add_option("--s0", sim.s0, "Initial -se fraction")->capture_default_str();
  simulate->add_option("--c", sim.c, "Discrete: intrinsic -ra bias")->capture_default_str();
  simulate->add_option("--gamma", sim.gamma, "Discrete: enforcement-following fraction")->capture_default_str();
  simulate->add_option("--e-r", sim.e_r, "Discrete: -ra enforcement target")->capture_default_str();
  simulate->add_option("--e-s", sim.e_s, "Discrete: -se enforcement target")->capture_default_str();
  simulate->add_option("--r0", sim.r_init, "Discrete: initial r")->capture_default_str();
  simulate->add_option("--s-init", sim.s_init, "Discrete: initial s")->capture_default_str();
  simulate->add_option("--t-max", sim.t_max, "Last time (years or steps)")->capture_default_str();
  simulate->add_option("--dt", sim.dt, "Sampling step (continuous, phase)")->capture_default_str();
  simulate->add_option("--out", out, "CSV path (default <output>/trajectory.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? langfade::kExitOk : langfade::kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      sim.mode = langfade::parse_simulate_mode(mode);
      sim.svg = g.svg;
      const std::filesystem::path dir = g.output.empty() ? std::filesystem::path(".") : std::filesystem::path(g.output);
      sim.output = out.empty() ? dir / "trajectory.csv" : std::filesystem::path(out);
      return langfade::cmd_simulate(sim, std::cerr);
    }
    const langfade::RunConfig cfg = build_config(g);
    if (ingest->parsed()) return langfade::cmd_ingest(cfg, std::cerr);
    if (fit->parsed()) return langfade::cmd_fit(cfg, std::cerr);
    if (report->parsed()) return langfade::cmd_report(cfg, std::cerr);
  } catch (const langfade::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return langfade::kExitUsage;
  } catch (const langfade::FitError& e) {
    std::cerr << "fit failure: " << e.what() << "\n";
    return langfade::kExitFit;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return langfade::kExitData;
  }
  return langfade::kExitUsage;
}
