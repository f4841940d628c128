#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "langfade/config.hpp"

namespace langfade {

// Exit codes shared by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitFit = 3;

/// Streams the n-gram files and writes counts.csv, included_verbs.txt and
/// archaic_report.json into output_dir.
int cmd_ingest(const RunConfig& cfg, std::ostream& log);

/// Fits counts.csv and writes fit.csv and fit_summary.json into output_dir.
/// Verbs that cannot be fitted are listed and skipped.
int cmd_fit(const RunConfig& cfg, std::ostream& log);

enum class SimulateMode { kDiscrete, kContinuous, kPhase };

struct SimulateRequest {
  SimulateMode mode = SimulateMode::kContinuous;
  // continuous / phase
  double a = 0.027;
  double tau = 43.0;
  double s0 = 0.2;
  // discrete
  double c = 0.0;
  double gamma = 0.1;
  double e_r = 0.5;
  double e_s = 0.5;
  double r_init = 0.1;
  double s_init = 0.9;

  double t_max = 250.0;
  double dt = 1.0;  // sampling step for continuous / phase; discrete always steps by 1
  std::filesystem::path output;  // CSV path
  bool svg = false;              // also write <output>.svg
};

SimulateMode parse_simulate_mode(const std::string& text);

/// Writes `t,s,e_s` (continuous, phase) or `t,s,r` (discrete).
int cmd_simulate(const SimulateRequest& req, std::ostream& log);

/// Reads fit.csv (and counts.csv, CDH CSV when present) and writes
/// analysis.json plus tau_nu.svg, zipf.svg and, with CDH data, s0_cdh.svg.
int cmd_report(const RunConfig& cfg, std::ostream& log);

}  // namespace langfade
